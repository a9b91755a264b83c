#pragma once

#include "ergolab/counterexamples/conze.hpp"
#include "ergolab/counterexamples/epsilon.hpp"
#include "ergolab/counterexamples/rate.hpp"
#include "ergolab/counterexamples/stable.hpp"
#include "ergolab/counterexamples/tower.hpp"
