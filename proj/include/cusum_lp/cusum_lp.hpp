#pragma once

#include "cusum_lp/constants.hpp"
#include "cusum_lp/cusum.hpp"
#include "cusum_lp/dgp.hpp"
#include "cusum_lp/error.hpp"
#include "cusum_lp/hypothesis_test.hpp"
#include "cusum_lp/limit_laws.hpp"
#include "cusum_lp/quadrature.hpp"
#include "cusum_lp/study.hpp"
#include "cusum_lp/table.hpp"
#include "cusum_lp/table_cache.hpp"
#include "cusum_lp/time_series.hpp"
#include "cusum_lp/variance.hpp"
#include "cusum_lp/version.hpp"
#include "cusum_lp/weight.hpp"
