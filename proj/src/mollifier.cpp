#include "acns/mollifier.hpp"

#include <cmath>

#include "acns/errors.hpp"

namespace acns {

Mollifier Mollifier::build(double alpha, const DomainGeometry& geom) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw AlphaOutOfRange("mollifier radius must lie in (0,1)");
    Mollifier m;
    m.alpha = alpha;
    for (int a = 0; a < geom.dim; ++a) {
        int h = int(std::floor(alpha / geom.spacing[a]));
        while (h > 0 && h * geom.spacing[a] >= alpha) --h;
        m.halfwidth[a] = h;
    }
    const int h0 = m.halfwidth[0], h1 = m.halfwidth[1], h2 = m.halfwidth[2];
    m.weights.assign(std::size_t(2 * h0 + 1) * (2 * h1 + 1) * (2 * h2 + 1), 0.0);
    double sum = 0;
    for (int ok = -h2; ok <= h2; ++ok)
        for (int oj = -h1; oj <= h1; ++oj)
            for (int oi = -h0; oi <= h0; ++oi) {
                double r2 = 0;
                const int off[3] = {oi, oj, ok};
                for (int a = 0; a < geom.dim; ++a) {
                    const double x = off[a] * geom.spacing[a] / alpha;
                    r2 += x * x;
                }
                if (r2 >= 1.0) continue;
                const double w = std::exp(-1.0 / (1.0 - r2));
                m.weights[(oi + h0) +
                          std::size_t(2 * h0 + 1) * ((oj + h1) + std::size_t(2 * h1 + 1) * (ok + h2))] = w;
                sum += w;
            }
    if (sum == 0.0) {
        // degenerate kernel: identity
        m.weights[(0 + h0) + std::size_t(2 * h0 + 1) * ((0 + h1) + std::size_t(2 * h1 + 1) * (0 + h2))] = 1.0;
        sum = 1.0;
    }
    const double scale = 1.0 / (sum * geom.cell_volume());
    for (double& w : m.weights) w *= scale;
    return m;
}

ScalarField mollify(const ScalarField& f, const Mollifier& m) {
    const auto& g = *f.geom;
    ScalarField out(f.geom);
    const int h0 = m.halfwidth[0], h1 = m.halfwidth[1], h2 = g.dim == 3 ? m.halfwidth[2] : 0;
    for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const std::size_t c = g.cell_index(i, j, k);
                if (!g.wet(c)) continue;
                double acc = 0, wsum = 0;
                for (int ok = -h2; ok <= h2; ++ok)
                    for (int oj = -h1; oj <= h1; ++oj)
                        for (int oi = -h0; oi <= h0; ++oi) {
                            const double w = m.weight(oi, oj, ok);
                            if (w == 0.0) continue;
                            int ii = i + oi, jj = j + oj, kk = k + ok;
                            if (g.periodic) {
                                ii = (ii % g.cells[0] + g.cells[0]) % g.cells[0];
                                jj = (jj % g.cells[1] + g.cells[1]) % g.cells[1];
                                kk = (kk % g.cells[2] + g.cells[2]) % g.cells[2];
                            } else if (ii < 0 || ii >= g.cells[0] || jj < 0 ||
                                       jj >= g.cells[1] || kk < 0 || kk >= g.cells[2]) {
                                continue;
                            }
                            const std::size_t cc = g.cell_index(ii, jj, kk);
                            if (!g.wet(cc)) continue;
                            acc += w * f.v[cc];
                            wsum += w;
                        }
                out.v[c] = wsum > 0 ? acc / wsum : 0.0;
            }
    return out;
}

StaggeredField mollify(const StaggeredField& u, const Mollifier& m) {
    const auto& g = *u.geom;
    StaggeredField out(u.geom);
    const int h0 = m.halfwidth[0], h1 = m.halfwidth[1], h2 = g.dim == 3 ? m.halfwidth[2] : 0;
    for (int a = 0; a < g.dim; ++a) {
        const auto fc = g.face_counts(a);
        for (int k = 0; k < fc[2]; ++k)
            for (int j = 0; j < fc[1]; ++j)
                for (int i = 0; i < fc[0]; ++i) {
                    const std::size_t f = g.face_index(a, i, j, k);
                    if (!g.face_active[a][f]) continue;
                    double acc = 0, wsum = 0;
                    for (int ok = -h2; ok <= h2; ++ok)
                        for (int oj = -h1; oj <= h1; ++oj)
                            for (int oi = -h0; oi <= h0; ++oi) {
                                const double w = m.weight(oi, oj, ok);
                                if (w == 0.0) continue;
                                int ii = i + oi, jj = j + oj, kk = k + ok;
                                if (g.periodic) {
                                    ii = (ii % fc[0] + fc[0]) % fc[0];
                                    jj = (jj % fc[1] + fc[1]) % fc[1];
                                    kk = (kk % fc[2] + fc[2]) % fc[2];
                                } else if (ii < 0 || ii >= fc[0] || jj < 0 || jj >= fc[1] ||
                                           kk < 0 || kk >= fc[2]) {
                                    continue;
                                }
                                const std::size_t ff = g.face_index(a, ii, jj, kk);
                                if (!g.face_active[a][ff]) continue;
                                acc += w * u.comp[a][ff];
                                wsum += w;
                            }
                    out.comp[a][f] = wsum > 0 ? acc / wsum : 0.0;
                }
    }
    return out;
}

}  // namespace acns
