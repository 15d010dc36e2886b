#include "converse_kit/quadrature.hpp"

#include <cmath>

#include "converse_kit/errors.hpp"

namespace converse_kit {

namespace {

struct Panel {
    double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
           refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int panels, int max_depth) {
    if (!(b >= a)) throw DomainError("adaptive_simpson: requires a <= b");
    if (!(abs_tol > 0.0)) throw DomainError("adaptive_simpson: tolerance must be positive");
    if (panels < 1) panels = 1;
    const double width = (b - a) / panels;
    const double panel_tol = abs_tol / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * width;
        const double hi = (k + 1 == panels) ? b : lo + width;
        const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
        total += refine(f, {lo, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi)}, panel_tol, max_depth);
    }
    return total;
}

}  // namespace converse_kit
