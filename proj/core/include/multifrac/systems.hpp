#pragma once

#include "multifrac/ifs.hpp"

namespace multifrac::systems {

/// Z[lambda] with lambda = 1/beta_n, the root of x^n - x^(n-1) - ... - x + 1 in (0, 1).
ContextPtr salem_context(int n);

/// Z[lambda] with lambda = (sqrt 5 - 1)/2, modulus x^2 + x - 1.
ContextPtr golden_context();

/// {lambda x - 1, lambda x + 1} with weights (1/2, 1/2).
EqualRatioIFS bernoulli(const ContextPtr& ctx);

/// {x/3, x/3 + 2/3} with weights (1/2, 1/2).
EqualRatioIFS cantor();

/// {x/2, x/2 + 1/2} with weights (1/2, 1/2); the invariant measure is Lebesgue on [0, 1].
EqualRatioIFS binary_lebesgue();

}  // namespace multifrac::systems
