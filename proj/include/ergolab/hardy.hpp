#pragma once

#include "ergolab/hardy/conjugate.hpp"
#include "ergolab/hardy/means.hpp"
#include "ergolab/hardy/pole_sum.hpp"
#include "ergolab/hardy/returns.hpp"
#include "ergolab/hardy/series.hpp"
