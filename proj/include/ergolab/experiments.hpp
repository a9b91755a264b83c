#pragma once

#include "ergolab/experiments/config.hpp"
#include "ergolab/experiments/registry.hpp"
#include "ergolab/experiments/report.hpp"
