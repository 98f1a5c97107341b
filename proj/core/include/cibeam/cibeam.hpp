#pragma once

#include "cibeam/ci_iterative.hpp"
#include "cibeam/ci_kernel.hpp"
#include "cibeam/harness.hpp"
#include "cibeam/linalg.hpp"
#include "cibeam/qp_simplex.hpp"
#include "cibeam/rng.hpp"
#include "cibeam/signal.hpp"
#include "cibeam/zf.hpp"
