#pragma once

#include <functional>

namespace converse_kit {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance abs_tol.
///
/// The interval is first cut into `panels` equal pieces (each receiving
/// abs_tol / panels) so that narrow features are not missed by the first
/// Simpson estimate.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int panels = 1, int max_depth = 48);

}  // namespace converse_kit
