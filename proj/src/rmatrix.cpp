#include "laxfactor/rmatrix.hpp"

#include <functional>

namespace laxfactor {

const char* to_string(RKind k) {
    switch (k) {
        case RKind::BaxterBelavin: return "baxter-belavin";
        case RKind::Felder: return "felder";
        case RKind::ACF: return "acf";
    }
    return "?";
}

const char* to_string(IrfVariant v) {
    switch (v) {
        case IrfVariant::Felder_BB: return "felder-bb";
        case IrfVariant::ACF_Felder: return "acf-felder";
        case IrfVariant::ACF_BB: return "acf-bb";
        case IrfVariant::Residue: return "residue";
    }
    return "?";
}

void RMatrixSpec::validate() const {
    require(N >= 1, ErrorKind::DimensionMismatch, "N must be positive");
    require(tau.imag() > 0.0, ErrorKind::InvalidArgument, "Im tau must be positive");
    if (kind == RKind::BaxterBelavin) {
        require(!dynamical_q, ErrorKind::InvalidArgument, "Baxter-Belavin R-matrix takes no dynamical variables");
    } else {
        require(bool(dynamical_q), ErrorKind::MissingDynamical,
                std::string(to_string(kind)) + " R-matrix needs dynamical variables");
        require(dynamical_q->size() == N, ErrorKind::DimensionMismatch, "dynamical q has the wrong length");
    }
}

namespace {

Matrix bb(int N, cplx hbar, const FunctionClass& cls, cplx z) {
    Matrix r = Matrix::Zero(N * N, N * N);
    for (int a1 = 0; a1 < N; ++a1)
        for (int a2 = 0; a2 < N; ++a2) {
            const cplx w = omega_alpha(a1, a2, cls.tau(), N);
            r += phi_alpha(a1, a2, z, w + hbar, cls, N) *
                 kron(heisenberg_basis(a1, a2, N), heisenberg_basis(-a1, -a2, N));
        }
    return r;
}

// the (ia, jb) entry block E_ij (x) E_ab lives at row i*N + a, column j*N + b
void add_unit(Matrix& r, int N, int i, int j, int a, int b, cplx v) { r(i * N + a, j * N + b) += v; }

Matrix felder(int N, cplx hbar, const FunctionClass& cls, cplx z, const Vector& q) {
    Matrix r = Matrix::Zero(N * N, N * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                add_unit(r, N, i, i, i, i, cls.phi(hbar, z));
                continue;
            }
            const cplx qij = q(i) - q(j);
            add_unit(r, N, i, i, j, j, cls.phi(hbar, -qij));
            add_unit(r, N, i, j, j, i, cls.phi(z, qij));
        }
    return r;
}

Matrix acf(int N, cplx hbar, const FunctionClass& cls, cplx z1, cplx z2, const Vector& q) {
    Matrix r = Matrix::Zero(N * N, N * N);
    const cplx diag = cls.e1(hbar) + cls.e1(z1 - z2) + cls.e1(z2) - cls.e1(z1 + hbar);
    for (int i = 0; i < N; ++i) {
        add_unit(r, N, i, i, i, i, diag);
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            const cplx qij = q(i) - q(j);
            add_unit(r, N, i, i, j, j, cls.phi(hbar, qij));
            add_unit(r, N, i, j, j, i, cls.phi(z1 - z2, qij));
            add_unit(r, N, i, j, j, j, -cls.phi(z1 + hbar, qij));
            add_unit(r, N, j, j, i, j, cls.phi(z2, qij));
        }
    }
    return r;
}

Matrix raw(const RMatrixSpec& s, const FunctionClass& cls, cplx z1, cplx z2, const Vector& q) {
    switch (s.kind) {
        case RKind::BaxterBelavin: return bb(s.N, s.hbar, cls, z1 - z2);
        case RKind::Felder: return felder(s.N, s.hbar, cls, z1 - z2, q);
        case RKind::ACF: return acf(s.N, s.hbar, cls, z1, z2, q);
    }
    return {};
}

// two-site operator on sites (a, b) of three, identity on the remaining one.
// The operator may depend on the basis index of the spectator site (dynamical shift).
Matrix embed(const std::function<Matrix(int)>& op, int a, int b, int n) {
    const int c = 3 - a - b;
    const int d = n * n * n;
    Matrix out = Matrix::Zero(d, d);
    auto flat = [n](int x0, int x1, int x2) { return (x0 * n + x1) * n + x2; };
    for (int ic = 0; ic < n; ++ic) {
        const Matrix m = op(ic);
        for (int ia = 0; ia < n; ++ia)
            for (int ib = 0; ib < n; ++ib)
                for (int ja = 0; ja < n; ++ja)
                    for (int jb = 0; jb < n; ++jb) {
                        int ii[3], jj[3];
                        ii[a] = ia, ii[b] = ib, ii[c] = ic;
                        jj[a] = ja, jj[b] = jb, jj[c] = ic;
                        out(flat(ii[0], ii[1], ii[2]), flat(jj[0], jj[1], jj[2])) = m(ia * n + ib, ja * n + jb);
                    }
    }
    return out;
}

Matrix embed(const Matrix& m, int a, int b, int n) {
    return embed([&m](int) { return m; }, a, b, n);
}

Vector shifted(const Vector& q, int k, cplx h) {
    Vector s = q;
    s(k) += h;
    return s;
}

// sum_k f(k) (x) E_kk  (site = 1) or sum_k E_kk (x) f(k)  (site = 2)
Matrix block_dynamical(const std::function<Matrix(int)>& f, int site, int N) {
    Matrix out = Matrix::Zero(N * N, N * N);
    for (int k = 0; k < N; ++k) {
        const Matrix e = unit_matrix(N, k, k);
        out += site == 1 ? kron(f(k), e) : kron(e, f(k));
    }
    return out;
}

}  // namespace

TwoSiteOperator r_matrix(const RMatrixSpec& spec, cplx z1, cplx z2) {
    spec.validate();
    const auto cls = FunctionClass::elliptic(spec.tau);
    const Vector q = spec.dynamical_q ? *spec.dynamical_q : Vector();
    Matrix r = raw(spec, cls, z1, z2, q);
    check_finite(r, "r_matrix");
    return TwoSiteOperator(spec.N, std::move(r));
}

TwoSiteOperator r_matrix_normalized(int N, cplx hbar, cplx tau, cplx z1, cplx z2) {
    RMatrixSpec s{RKind::BaxterBelavin, N, hbar / double(N), tau, std::nullopt};
    TwoSiteOperator r = r_matrix(s, z1, z2);
    r.matrix() /= double(N);
    return r;
}

TwoSiteOperator classical_r(cplx z, cplx tau, int N) {
    require(N >= 1, ErrorKind::DimensionMismatch, "N must be positive");
    const auto cls = FunctionClass::elliptic(tau);
    Matrix r = cls.e1(z) * Matrix::Identity(N * N, N * N);
    for (int a1 = 0; a1 < N; ++a1)
        for (int a2 = 0; a2 < N; ++a2) {
            if (a1 == 0 && a2 == 0) continue;
            const cplx w = omega_alpha(a1, a2, tau, N);
            r += phi_alpha(a1, a2, z, w, cls, N) * kron(heisenberg_basis(a1, a2, N), heisenberg_basis(-a1, -a2, N));
        }
    return TwoSiteOperator(N, std::move(r));
}

double yang_baxter_residual(const RMatrixSpec& spec, cplx z1, cplx z2, cplx z3) {
    spec.validate();
    const int n = spec.N;
    const auto cls = FunctionClass::elliptic(spec.tau);
    const cplx h = spec.hbar;
    Matrix lhs, rhs;
    switch (spec.kind) {
        case RKind::BaxterBelavin: {
            const Vector none;
            const Matrix r12 = embed(bb(n, h, cls, z1 - z2), 0, 1, n);
            const Matrix r13 = embed(bb(n, h, cls, z1 - z3), 0, 2, n);
            const Matrix r23 = embed(bb(n, h, cls, z2 - z3), 1, 2, n);
            lhs = r12 * r13 * r23;
            rhs = r23 * r13 * r12;
            break;
        }
        case RKind::Felder: {
            const Vector& q = *spec.dynamical_q;
            auto rf = [&](cplx z, const Vector& qq) { return felder(n, h, cls, z, qq); };
            // q - hbar^{(k)}: shift by the basis index of the spectator site
            lhs = embed(rf(z1 - z2, q), 0, 1, n) *
                  embed([&](int k) { return rf(z1 - z3, shifted(q, k, -h)); }, 0, 2, n) *
                  embed(rf(z2 - z3, q), 1, 2, n);
            rhs = embed([&](int k) { return rf(z2 - z3, shifted(q, k, -h)); }, 1, 2, n) *
                  embed(rf(z1 - z3, q), 0, 2, n) *
                  embed([&](int k) { return rf(z1 - z2, shifted(q, k, -h)); }, 0, 1, n);
            break;
        }
        case RKind::ACF: {
            const Vector& q = *spec.dynamical_q;
            auto ra = [&](cplx a, cplx b) { return acf(n, h, cls, a, b, q); };
            lhs = embed(ra(z1, z2), 0, 1, n) * embed(ra(z1 - h, z3 - h), 0, 2, n) * embed(ra(z2, z3), 1, 2, n);
            rhs = embed(ra(z2 - h, z3 - h), 1, 2, n) * embed(ra(z1, z3), 0, 2, n) * embed(ra(z1 - h, z2 - h), 0, 1, n);
            break;
        }
    }
    return max_abs(Matrix(lhs - rhs));
}

Matrix acf_residue(int N, cplx hbar, cplx tau, const Vector& q, cplx z1) {
    const auto cls = FunctionClass::elliptic(tau);
    return residue_at([&](cplx w) { return acf(N, hbar, cls, z1, w, q); }, 0.0);
}

double irf_vertex_residual(IrfVariant variant, int N, cplx hbar, cplx tau, const Vector& q, cplx z1, cplx z2) {
    require(q.size() == N, ErrorKind::DimensionMismatch, "q has the wrong length");
    const auto cls = FunctionClass::elliptic(tau);
    const Intertwiner g(cls, true, N);
    const Matrix id = Matrix::Identity(N, N);
    const Matrix rb = r_matrix_normalized(N, hbar, tau, z1, z2).matrix();
    auto g_shift = [&](cplx z, int k) { return g.g(z, shifted(q, k, hbar)); };
    auto g_shift_inv = [&](cplx z, int k) { return g.g_inverse(z, shifted(q, k, hbar)); };
    Matrix lhs, rhs;
    switch (variant) {
        case IrfVariant::Felder_BB:
            lhs = kron(id, g.g(z2, q)) * block_dynamical([&](int k) { return g_shift(z1, k); }, 1, N) *
                  felder(N, hbar, cls, z1 - z2, q);
            rhs = rb * kron(g.g(z1, q), id) * block_dynamical([&](int k) { return g_shift(z2, k); }, 2, N);
            break;
        case IrfVariant::ACF_Felder:
            lhs = felder(N, hbar, cls, z1 - z2, q);
            rhs = block_dynamical([&](int k) { return g_shift_inv(z1, k); }, 1, N) * kron(g.g(z1 + hbar, q), id) *
                  acf(N, hbar, cls, z1, z2, q) * kron(id, g.g_inverse(z2 + hbar, q)) *
                  block_dynamical([&](int k) { return g_shift(z2, k); }, 2, N);
            break;
        case IrfVariant::ACF_BB:
            lhs = rb;
            rhs = kron(g.g(z1 + hbar, q), id) * kron(id, g.g(z2, q)) * acf(N, hbar, cls, z1, z2, q) *
                  kron(id, g.g_inverse(z2 + hbar, q)) * kron(g.g_inverse(z1, q), id);
            break;
        case IrfVariant::Residue: {
            const cplx z = z1 - z2;
            const Matrix gb = laurent_data(g, q).gbreve0;
            lhs = kron(id, gb) * bb(N, hbar, cls, z) / double(N);
            rhs = kron(g.g(z + double(N) * hbar, q), id) * o_operator(N).matrix() *
                  kron(id, g.g_inverse(double(N) * hbar, q)) * kron(g.g_inverse(z, q), id);
            break;
        }
    }
    return max_abs(Matrix(lhs - rhs));
}

double irf_hbar_inverse_residual(const Vector& q, cplx z, cplx tau) {
    const int N = int(q.size());
    const auto cls = FunctionClass::elliptic(tau);
    const Intertwiner g(cls, true, N);
    const Matrix id = Matrix::Identity(N, N);
    const Matrix gb2 = kron(id, laurent_data(g, q).gbreve0);
    const Matrix rhs = kron(g.g(z, q), id) * o_operator(N).matrix() * kron(g.g_inverse(z, q), id) * gb2;
    return max_abs(Matrix(gb2 - rhs));
}

Matrix lax_from_r(const Matrix& S, cplx z, cplx hbar, cplx tau) {
    const int N = int(S.rows());
    RMatrixSpec s{RKind::BaxterBelavin, N, hbar, tau, std::nullopt};
    return trace_over_site(r_matrix(s, z, 0.0), 2, S) / double(N);
}

Theorem1M m_rs_theorem1(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z, cplx hbar, cplx c) {
    const int N = x.size();
    ModelSpec spec;
    spec.model = Model::RS;
    spec.cls = cls;
    spec.spectral = spectral;
    spec.hbar = hbar;
    spec.c = c;
    spec.N = N;
    const Vector v = velocity_map(spec, x);
    const Intertwiner g(cls, spectral, N);
    const Matrix gz = g.g(z, x.q);
    const Matrix l = solve(gz, g.g(z, x.q, 1));
    Theorem1M out;
    if (cls.is_elliptic()) {
        const LaurentData ld = laurent_data(g, x.q);
        const Vector eP = (x.p / c).array().exp().matrix();
        const Matrix tail = (cls.th_prime0() / cls.th(hbar)) * g.g(double(N) * hbar, x.q) * eP.asDiagonal();
        const TwoSiteOperator o = o_operator(N);
        out.G = trace_over_site(o, 2, ld.gbreve0 * tail);
        out.F = trace_over_site(o, 2, ld.A * tail);
        out.M = -l * out.G - out.F + solve(gz, g.g_dot(z, x.q, v));
        return out;
    }
    out.G = v.asDiagonal();
    out.F = Matrix::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) out.F(i, i) += v(k) * cls.e1(x.q(i) - x.q(k) + hbar);
    out.M = -l * out.G - out.F - Matrix(g.d0_rate(x.q, v).asDiagonal());
    return out;
}

}  // namespace laxfactor
