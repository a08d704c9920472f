#include "acns/norms.hpp"

#include <algorithm>
#include <cmath>

#include "acns/errors.hpp"

namespace acns {

namespace {

double lp_accumulate(const std::vector<double>& v, double p, double& maxabs) {
    double s = 0;
    for (double x : v) {
        const double a = std::abs(x);
        maxabs = std::max(maxabs, a);
        s += std::pow(a, p);
    }
    return s;
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
    if (p < 1) throw BadExponent("lp_norm requires p >= 1");
    const auto& g = *f.geom;
    if (std::isinf(p)) {
        double m = 0;
        for (std::size_t c = 0; c < f.v.size(); ++c)
            if (g.wet(c)) m = std::max(m, std::abs(f.v[c]));
        return m;
    }
    double s = 0;
    for (std::size_t c = 0; c < f.v.size(); ++c)
        if (g.wet(c)) s += std::pow(std::abs(f.v[c]), p);
    return std::pow(s * g.cell_volume(), 1.0 / p);
}

double lp_norm(const StaggeredField& u, double p) {
    if (p < 1) throw BadExponent("lp_norm requires p >= 1");
    const auto& g = *u.geom;
    double maxabs = 0, s = 0;
    for (int a = 0; a < g.dim; ++a) s += lp_accumulate(u.comp[a], p, maxabs);
    if (std::isinf(p)) return maxabs;
    return std::pow(s * g.cell_volume(), 1.0 / p);
}

double space_time_norm(const std::vector<double>& per_snapshot, double dt, double q) {
    if (per_snapshot.empty()) throw EmptySeries("space_time_norm needs snapshots");
    if (q < 1) throw BadExponent("space_time_norm requires q >= 1");
    if (std::isinf(q)) return *std::max_element(per_snapshot.begin(), per_snapshot.end());
    const std::size_t n = per_snapshot.size();
    if (n == 1) return 0.0;  // zero-length interval
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 * dt : dt;
        s += w * std::pow(std::abs(per_snapshot[i]), q);
    }
    return std::pow(s, 1.0 / q);
}

SpectralNorm sobolev_norm(const ScalarField& f, double gamma, const SpectralBasis& basis,
                          double capture_min) {
    if (std::abs(gamma) > 3.0 + 1e-12)
        throw BadExponent("sobolev_norm supports |gamma| <= 3");
    basis.check_match(f.geom);
    const auto coef = basis.coefficients(f);
    double s = 0, cap = 0;
    for (int j = 0; j < basis.rank; ++j) {
        s += coef[j] * coef[j] * std::pow(basis.eigenvalue[j], gamma);
        cap += coef[j] * coef[j];
    }
    const double l2 = lp_norm(f, 2.0);
    SpectralNorm out;
    out.value = std::sqrt(s);
    out.l2_capture = l2 > 0 ? cap / (l2 * l2) : 1.0;
    if (gamma > 0 && out.l2_capture < capture_min)
        throw InsufficientRank("basis captures too little of the field for gamma > 0");
    return out;
}

SpectralNorm negative_sobolev_lp_norm(const ScalarField& f, int k, double r,
                                      const SpectralBasis& basis) {
    if (k < 1 || k > 3) throw BadExponent("negative_sobolev_lp_norm needs k in {1,2,3}");
    if (r != 2.0 && r != 4.0) throw BadExponent("negative_sobolev_lp_norm needs r in {2,4}");
    basis.check_match(f.geom);
    const auto coef = basis.coefficients(f);
    const ScalarField smoothed = basis.synthesize(coef, -0.5 * k);
    double cap = 0;
    for (double c : coef) cap += c * c;
    const double l2 = lp_norm(f, 2.0);
    SpectralNorm out;
    out.value = lp_norm(smoothed, r);
    out.l2_capture = l2 > 0 ? cap / (l2 * l2) : 1.0;
    return out;
}

}  // namespace acns
