#pragma once

#include "cfq/basis.hpp"
#include "cfq/functionals.hpp"
#include "cfq/gaussian.hpp"
#include "cfq/integrate.hpp"
#include "cfq/io.hpp"
#include "cfq/lindblad.hpp"
#include "cfq/models.hpp"
#include "cfq/operator.hpp"
#include "cfq/scenarios.hpp"
#include "cfq/slh.hpp"
#include "cfq/stability.hpp"
#include "cfq/types.hpp"
