#include "acns/elliptic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>

#include "acns/errors.hpp"
#include "acns/operators.hpp"

namespace acns {

namespace {

double wet_mean(const ScalarField& f) {
    const auto& g = *f.geom;
    double s = 0;
    for (std::size_t c = 0; c < f.v.size(); ++c)
        if (g.wet(c)) s += f.v[c];
    return s / double(g.wet_count());
}

void remove_mean(ScalarField& f) {
    const auto& g = *f.geom;
    const double m = wet_mean(f);
    for (std::size_t c = 0; c < f.v.size(); ++c)
        if (g.wet(c)) f.v[c] -= m;
}

double raw_dot(const ScalarField& a, const ScalarField& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s;
}

// Jacobi diagonal of the two SPD operators.
ScalarField operator_diagonal(const GeometryPtr& geom, bool dirichlet) {
    const auto& g = *geom;
    ScalarField d(geom);
    for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const std::size_t c = g.cell_index(i, j, k);
                if (!g.wet(c)) continue;
                double s = 0;
                for (int a = 0; a < g.dim; ++a) {
                    const double ih2 = 1.0 / (g.spacing[a] * g.spacing[a]);
                    for (int side = 0; side <= 1; ++side) {
                        int nb[3] = {i, j, k};
                        nb[a] += side ? 1 : -1;
                        bool wet_nb;
                        if (g.periodic) {
                            nb[a] = (nb[a] + g.cells[a]) % g.cells[a];
                            wet_nb = g.wet(g.cell_index(nb[0], nb[1], nb[2]));
                        } else {
                            wet_nb = nb[a] >= 0 && nb[a] < g.cells[a] &&
                                     g.wet(g.cell_index(nb[0], nb[1], nb[2]));
                        }
                        if (dirichlet)
                            s += (wet_nb ? 1.0 : 2.0) * ih2;
                        else
                            s += (wet_nb ? 1.0 : 0.0) * ih2;
                    }
                }
                d.v[c] = s;
            }
    return d;
}

// Preconditioned CG on the wet cells. `neumann` switches the operator and
// activates the constant null-space projection.
ScalarField pcg(const ScalarField& rhs, bool neumann, const PoissonOptions& opt) {
    const auto geom = rhs.geom;
    const auto& g = *geom;
    const std::size_t n = g.ncells();
    const long max_iter = std::max<long>(64, opt.max_iter_factor * long(n));

    ScalarField x = opt.initial_guess ? *opt.initial_guess : ScalarField(geom);
    if (opt.initial_guess) require_same_geometry(opt.initial_guess->geom, geom);
    ScalarField r(geom), z(geom), p(geom), ap(geom);
    const ScalarField diag = operator_diagonal(geom, !neumann);

    auto apply = [&](const ScalarField& in, ScalarField& out) {
        if (neumann)
            apply_neg_laplacian_neumann(in, out);
        else
            apply_neg_laplacian_dirichlet(in, out);
    };

    // r = b - A x  (note solvers work on the SPD operator -lap)
    ScalarField b = rhs;
    scale(b, -1.0);
    if (neumann) remove_mean(b);
    apply(x, ap);
    for (std::size_t c = 0; c < n; ++c) r.v[c] = b.v[c] - ap.v[c];
    if (neumann) remove_mean(r);

    const double bnorm = std::sqrt(raw_dot(b, b));
    if (bnorm == 0.0) {
        ScalarField zero(geom);
        return zero;
    }

    auto precondition = [&](const ScalarField& rr, ScalarField& zz) {
        for (std::size_t c = 0; c < n; ++c)
            zz.v[c] = g.wet(c) && diag.v[c] > 0 ? rr.v[c] / diag.v[c] : 0.0;
        if (neumann) remove_mean(zz);
    };

    precondition(r, z);
    p = z;
    double rz = raw_dot(r, z);
    double rnorm = std::sqrt(raw_dot(r, r));

    long it = 0;
    while (rnorm > opt.tol * bnorm) {
        if (++it > max_iter)
            throw NoConvergence("poisson solver exceeded iteration cap", it, rnorm / bnorm);
        apply(p, ap);
        const double pap = raw_dot(p, ap);
        if (pap <= 0)
            throw NoConvergence("poisson solver lost positive definiteness", it, rnorm / bnorm);
        const double alpha = rz / pap;
        for (std::size_t c = 0; c < n; ++c) {
            x.v[c] += alpha * p.v[c];
            r.v[c] -= alpha * ap.v[c];
        }
        if (neumann) remove_mean(r);
        precondition(r, z);
        const double rz_new = raw_dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t c = 0; c < n; ++c) p.v[c] = z.v[c] + beta * p.v[c];
        rnorm = std::sqrt(raw_dot(r, r));
    }

    enforce_solid_zero(x);
    if (neumann) remove_mean(x);
    return x;
}

}  // namespace

ScalarField solve_poisson_neumann(const ScalarField& rhs, const PoissonOptions& opt) {
    const auto& g = *rhs.geom;
    ScalarField b = rhs;
    enforce_solid_zero(b);
    const double integral = std::abs(wet_mean(b)) * double(g.wet_count()) * g.cell_volume();
    const double l2 = std::sqrt(raw_dot(b, b) * g.cell_volume());
    const double domain = double(g.wet_count()) * g.cell_volume();
    if (opt.remove_mean_rhs) {
        remove_mean(b);
    } else if (integral > 1e-10 * std::max(l2 * std::sqrt(domain), 1e-300)) {
        throw IncompatibleRHS("Neumann rhs has nonzero integral");
    } else {
        remove_mean(b);  // kill roundoff-level incompatibility
    }
    return pcg(b, true, opt);
}

ScalarField solve_poisson_dirichlet(const ScalarField& rhs, const PoissonOptions& opt) {
    ScalarField b = rhs;
    enforce_solid_zero(b);
    return pcg(b, false, opt);
}

// ---------------------------------------------------------------------------
// Spectral basis
// ---------------------------------------------------------------------------

std::vector<double> SpectralBasis::coefficients(const ScalarField& f) const {
    check_match(f.geom);
    const double vol = geom->cell_volume();
    std::vector<double> c(rank, 0.0);
    for (int j = 0; j < rank; ++j) {
        const auto& v = mode[j];
        double s = 0;
        for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * f.v[i];
        c[j] = s * vol;
    }
    return c;
}

ScalarField SpectralBasis::synthesize(std::span<const double> coef, double power) const {
    ScalarField f(geom);
    const int m = std::min<int>(rank, int(coef.size()));
    for (int j = 0; j < m; ++j) {
        const double w = coef[j] * (power == 0.0 ? 1.0 : std::pow(eigenvalue[j], power));
        if (w == 0.0) continue;
        const auto& v = mode[j];
        for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] += w * v[i];
    }
    return f;
}

void SpectralBasis::check_match(const GeometryPtr& g) const {
    if (!g || !geom || g->hash != geom->hash)
        throw BasisMismatch("spectral basis built on a different geometry");
}

namespace {

struct KrylovState {
    std::vector<std::vector<double>> q;  // orthonormal cell fields
    Eigen::MatrixXd h;                   // <q_i, B q_j>, processed block symmetric
    int processed = 0;
};

double vec_dot(const std::vector<double>& a, const std::vector<double>& b, double vol) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * vol;
}

// Orthonormalize w against all columns of st.q (twice), normalize.
// Returns false on breakdown.
bool orthonormalize(std::vector<double>& w, const KrylovState& st, double vol) {
    const double before = std::sqrt(vec_dot(w, w, vol));
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : st.q) {
            const double c = vec_dot(w, q, vol);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
        }
    const double after = std::sqrt(vec_dot(w, w, vol));
    if (!(after > 1e-10 * std::max(before, 1e-300))) return false;
    for (double& x : w) x *= 1.0 / after;
    return true;
}

std::vector<double> random_wet_vector(const DomainGeometry& g, std::mt19937_64& rng) {
    std::vector<double> v(g.ncells(), 0.0);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (std::size_t c = 0; c < v.size(); ++c)
        if (g.wet(c)) v[c] = uni(rng);
    return v;
}

}  // namespace

SpectralBasis dirichlet_eigenbasis(const GeometryPtr& geom, int K) {
    const auto& g = *geom;
    const std::size_t nwet = g.wet_count();
    if (K < 1) throw Error("eigenbasis rank must be positive");
    if (std::size_t(K) > nwet / 4)
        throw RankTooLarge("rank exceeds a quarter of the fluid cell count");

    const double vol = g.cell_volume();
    std::mt19937_64 rng(g.hash ^ 0x9e3779b97f4a7c15ull);

    PoissonOptions inner_opt;
    inner_opt.tol = 1e-12;

    KrylovState st;
    const int block = 3;
    for (int b = 0; b < block; ++b) {
        auto v = random_wet_vector(g, rng);
        if (orthonormalize(v, st, vol)) st.q.push_back(std::move(v));
    }
    const int m_cap = int(std::min<std::size_t>(nwet - 4, std::size_t(4) * K + 64));
    st.h = Eigen::MatrixXd::Zero(m_cap + block, m_cap + block);

    SpectralBasis basis;
    basis.geom = geom;
    basis.rank = K;

    ScalarField tmp_in(geom), tmp_out(geom);
    // inv(-lap) q: the Dirichlet solve inverts lap itself, hence the sign
    auto apply_inverse = [&](const std::vector<double>& in) {
        tmp_in.v = in;
        ScalarField sol = solve_poisson_dirichlet(tmp_in, inner_opt);
        for (double& x : sol.v) x = -x;
        return sol.v;
    };

    long next_check = K + 16;
    while (true) {
        if (st.processed >= int(st.q.size())) {
            auto v = random_wet_vector(g, rng);
            if (!orthonormalize(v, st, vol))
                throw NoConvergence("eigenbasis: Krylov space exhausted", st.processed, 0.0);
            st.q.push_back(std::move(v));
        }
        const int j = st.processed;
        std::vector<double> w = apply_inverse(st.q[j]);
        for (int i = 0; i < int(st.q.size()); ++i) {
            const double hij = vec_dot(st.q[i], w, vol);
            st.h(i, j) = hij;
            st.h(j, i) = hij;
        }
        if (orthonormalize(w, st, vol) && int(st.q.size()) < m_cap)
            st.q.push_back(std::move(w));
        ++st.processed;

        if (st.processed >= next_check || st.processed >= m_cap) {
            next_check = st.processed + 32;
            const int m = st.processed;
            if (m < K) {
                if (st.processed >= m_cap)
                    throw NoConvergence("eigenbasis: cap before reaching rank", m, 0.0);
                continue;
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(st.h.topLeftCorner(m, m));
            // Largest eigenvalues of the inverse are the smallest of the
            // operator; Eigen returns ascending order.
            std::vector<double> lam(K);
            std::vector<std::vector<double>> vecs(K);
            bool ok = true;
            for (int r = 0; r < K && ok; ++r) {
                const double theta = es.eigenvalues()(m - 1 - r);
                if (!(theta > 0)) {
                    ok = false;
                    break;
                }
                auto& v = vecs[r];
                v.assign(g.ncells(), 0.0);
                const auto s = es.eigenvectors().col(m - 1 - r);
                for (int i = 0; i < m; ++i) {
                    const double si = s(i);
                    if (si == 0.0) continue;
                    const auto& qi = st.q[i];
                    for (std::size_t c = 0; c < v.size(); ++c) v[c] += si * qi[c];
                }
                // Rayleigh quotient sharpens 1/theta; then check the
                // residual ||L v - lam v|| <= 1e-6 lam directly.
                tmp_in.v = v;
                apply_neg_laplacian_dirichlet(tmp_in, tmp_out);
                double lam_rq = 0;
                for (std::size_t c = 0; c < v.size(); ++c) lam_rq += v[c] * tmp_out.v[c];
                lam_rq *= vol;
                lam[r] = lam_rq > 0 ? lam_rq : 1.0 / theta;
                double res = 0;
                for (std::size_t c = 0; c < v.size(); ++c) {
                    const double d = tmp_out.v[c] - lam[r] * v[c];
                    res += d * d;
                }
                res = std::sqrt(res * vol);
                if (res > 1e-6 * lam[r]) ok = false;
            }
            if (ok) {
                // ascending eigenvalues; fix a deterministic sign
                std::vector<int> order(K);
                for (int r = 0; r < K; ++r) order[r] = r;
                std::sort(order.begin(), order.end(),
                          [&](int a, int b) { return lam[a] < lam[b]; });
                basis.eigenvalue.resize(K);
                basis.mode.resize(K);
                for (int r = 0; r < K; ++r) {
                    basis.eigenvalue[r] = lam[order[r]];
                    basis.mode[r] = std::move(vecs[order[r]]);
                    auto& v = basis.mode[r];
                    std::size_t imax = 0;
                    double amax = 0;
                    for (std::size_t c = 0; c < v.size(); ++c)
                        if (std::abs(v[c]) > amax) {
                            amax = std::abs(v[c]);
                            imax = c;
                        }
                    if (v[imax] < 0)
                        for (double& x : v) x = -x;
                }
                return basis;
            }
            if (st.processed >= m_cap)
                throw NoConvergence("eigenbasis: residuals did not converge", m, 0.0);
        }
    }
}

// ---------------------------------------------------------------------------
// Cache
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kBasisFileVersion = 1;

std::filesystem::path cache_path(std::uint64_t hash, int K) {
    const char* dir = std::getenv("ACNS_CACHE_DIR");
    if (!dir || !*dir) return {};
    char name[64];
    std::snprintf(name, sizeof(name), "basis_%016llx_k%d.bin",
                  static_cast<unsigned long long>(hash), K);
    return std::filesystem::path(dir) / name;
}

bool load_basis_file(const std::filesystem::path& path, const GeometryPtr& geom, int K,
                     SpectralBasis& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[8] = {};
    in.read(magic, 8);
    if (std::string(magic, 8) != "ACNSBAS\x01") return false;
    std::uint32_t version = 0, rank = 0;
    std::uint64_t hash = 0, ncells = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&hash), 8);
    in.read(reinterpret_cast<char*>(&rank), 4);
    in.read(reinterpret_cast<char*>(&ncells), 8);
    if (!in || version != kBasisFileVersion || hash != geom->hash || int(rank) != K ||
        ncells != geom->ncells())
        return false;
    out.geom = geom;
    out.rank = K;
    out.eigenvalue.resize(K);
    in.read(reinterpret_cast<char*>(out.eigenvalue.data()), K * 8);
    out.mode.assign(K, std::vector<double>(ncells));
    for (auto& v : out.mode)
        in.read(reinterpret_cast<char*>(v.data()), std::streamsize(ncells * 8));
    return bool(in);
}

void store_basis_file(const std::filesystem::path& path, const SpectralBasis& b) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream outf(tmp, std::ios::binary);
        if (!outf) return;
        outf.write("ACNSBAS\x01", 8);
        const std::uint32_t version = kBasisFileVersion, rank = b.rank;
        const std::uint64_t hash = b.geom->hash, ncells = b.geom->ncells();
        outf.write(reinterpret_cast<const char*>(&version), 4);
        outf.write(reinterpret_cast<const char*>(&hash), 8);
        outf.write(reinterpret_cast<const char*>(&rank), 4);
        outf.write(reinterpret_cast<const char*>(&ncells), 8);
        outf.write(reinterpret_cast<const char*>(b.eigenvalue.data()), b.rank * 8);
        for (const auto& v : b.mode)
            outf.write(reinterpret_cast<const char*>(v.data()), std::streamsize(ncells * 8));
    }
    std::filesystem::rename(tmp, path, ec);
}

std::mutex g_basis_mutex;
std::map<std::pair<std::uint64_t, int>, std::shared_ptr<const SpectralBasis>> g_basis_memo;

}  // namespace

std::shared_ptr<const SpectralBasis> dirichlet_eigenbasis_cached(const GeometryPtr& geom,
                                                                 int K) {
    const auto key = std::make_pair(geom->hash, K);
    {
        std::lock_guard<std::mutex> lock(g_basis_mutex);
        auto it = g_basis_memo.find(key);
        if (it != g_basis_memo.end()) return it->second;
    }
    const auto path = cache_path(geom->hash, K);
    auto basis = std::make_shared<SpectralBasis>();
    bool loaded = !path.empty() && load_basis_file(path, geom, K, *basis);
    if (!loaded) {
        *basis = dirichlet_eigenbasis(geom, K);
        if (!path.empty()) store_basis_file(path, *basis);
    }
    std::lock_guard<std::mutex> lock(g_basis_mutex);
    auto [it, inserted] = g_basis_memo.emplace(key, basis);
    return it->second;
}

}  // namespace acns
