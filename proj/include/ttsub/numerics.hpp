#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "ttsub/hadamard.hpp"

namespace ttsub {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace numdetail {

inline CVec vecm(const CMat& m) {
    return Eigen::Map<const CVec>(m.data(), m.size());
}

// streaming Gram-Schmidt over the plain Hilbert-Schmidt inner product (the
// weighted trace inner product differs from it by a fixed positive diagonal
// rescale, which does not change spans)
struct SpanBuilder {
    std::vector<CVec> onb;
    long long rows = 0;

    // returns true when the vector enlarged the span
    bool add(const CMat& m, double drop = 1e-8) {
        CVec v = vecm(m);
        rows = v.size();
        double n0 = v.norm();
        if (n0 < 1e-12) return false;
        v /= n0;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : onb) v -= b.dot(v) * b;
        double r = v.norm();
        if (r < drop) return false;
        onb.push_back(v / r);
        return true;
    }
    CMat matrix(size_t i, int d) const {
        return Eigen::Map<const CMat>(onb[i].data(), d, d);
    }
    CVec coords(const CMat& m) const {
        CVec c(onb.size());
        CVec v = vecm(m);
        for (size_t i = 0; i < onb.size(); ++i) c[i] = onb[i].dot(v);
        return c;
    }
    double residual(const CMat& m) const {
        CVec v = vecm(m);
        for (const auto& b : onb) v -= b.dot(v) * b;
        return v.norm();
    }
};

inline void memory_guard(long long entries) {
    if (entries > 50000000)
        throw std::length_error("representation exceeds the size guard");
}

// nullity of the column space map, with a guard band around the tolerance
inline int nullity(const CMat& K, double tol = 1e-7) {
    Eigen::SelfAdjointEigenSolver<CMat> es(K.adjoint() * K);
    Eigen::VectorXd sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    double cut = tol * std::max(1.0, sv.size() ? sv.maxCoeff() : 1.0);
    int null = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > cut && sv[i] < 10 * cut)
            throw std::runtime_error("rank ambiguity: singular value inside the guard band");
        if (sv[i] <= cut) ++null;
    }
    return null;
}

} // namespace numdetail

// Finite-dimensional *-algebra given by a linear basis of ambient matrices
// and the ambient trace functional tr(x) = sum_i w_i x_ii.
struct ConcreteAlgebra {
    int d = 0;
    std::vector<CMat> basis;          // orthonormal in the trace inner product
    Eigen::VectorXd trace_w;

    std::complex<double> tr(const CMat& x) const {
        std::complex<double> s = 0;
        for (int i = 0; i < d; ++i) s += trace_w[i] * x(i, i);
        return s;
    }
    std::complex<double> inner(const CMat& a, const CMat& b) const {
        return tr(a.adjoint() * b);
    }
    CMat project(const CMat& x) const {
        CMat p = CMat::Zero(d, d);
        for (const auto& b : basis) p += inner(b, x) * b;
        return p;
    }
    bool contains(const CMat& x, double tol = 1e-9) const {
        return (x - project(x)).norm() <= tol * std::max(1.0, x.norm());
    }
    int dim() const { return (int)basis.size(); }
};

// Orthonormalizes a spanning set and checks the *-algebra axioms: identity,
// adjoints, products (all pairs when small, sampled when large).
inline ConcreteAlgebra make_algebra(int d, const std::vector<CMat>& spanning,
                                    Eigen::VectorXd trace_w, bool verify = true) {
    for (int i = 0; i < trace_w.size(); ++i)
        if (trace_w[i] <= 0) throw std::invalid_argument("trace must be positive definite");
    ConcreteAlgebra a;
    a.d = d;
    a.trace_w = std::move(trace_w);
    // Gram-Schmidt in the weighted inner product via rescaling rows by sqrt(w)
    Eigen::VectorXd s = a.trace_w.cwiseSqrt();
    Eigen::VectorXd si = s.cwiseInverse();
    numdetail::SpanBuilder sb;
    for (const auto& m : spanning) sb.add(m * s.asDiagonal());
    for (size_t i = 0; i < sb.onb.size(); ++i)
        a.basis.push_back(sb.matrix(i, d) * si.asDiagonal());
    if (verify) {
        if (!a.contains(CMat::Identity(d, d)))
            throw std::logic_error("algebra does not contain the identity");
        for (const auto& b : a.basis)
            if (!a.contains(b.adjoint())) throw std::logic_error("not adjoint-closed");
        int m = a.dim();
        if (m <= 48) {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    if (!a.contains(a.basis[i] * a.basis[j]))
                        throw std::logic_error("not product-closed");
        } else {
            std::mt19937 rng(5);
            std::uniform_int_distribution<int> pick(0, m - 1);
            for (int t = 0; t < 300; ++t)
                if (!a.contains(a.basis[pick(rng)] * a.basis[pick(rng)]))
                    throw std::logic_error("not product-closed");
        }
    }
    return a;
}

// Trace-preserving projection onto the subalgebra in the trace inner product.
struct CondExp {
    ConcreteAlgebra target;
    CMat operator()(const CMat& x) const { return target.project(x); }
};

inline CondExp conditional_expectation(const ConcreteAlgebra& A, const ConcreteAlgebra& B) {
    if (A.d != B.d) throw std::invalid_argument("ambient mismatch");
    for (const auto& b : B.basis)
        if (!A.contains(b)) throw std::invalid_argument("B is not a subalgebra of A");
    // Gram condition of the basis in A's trace inner product
    int m = B.dim();
    CMat gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) gram(i, j) = A.inner(B.basis[i], B.basis[j]);
    Eigen::SelfAdjointEigenSolver<CMat> es(gram);
    double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (lo <= 0 || hi / lo > 1e12)
        throw std::runtime_error("ill-conditioned trace Gram matrix");
    CondExp e;
    e.target = B;
    e.target.trace_w = A.trace_w;
    return e;
}

// B1 < B2 = <B1, e> on L^2(B1); lower is the left-multiplication image of B1.
struct TowerLevel {
    ConcreteAlgebra lower, upper;
    CMat e;
    double tau = 0;
};

inline TowerLevel basic_construction(const ConcreteAlgebra& B0, const ConcreteAlgebra& B1) {
    for (const auto& b : B0.basis)
        if (!B1.contains(b)) throw std::invalid_argument("B0 is not a subalgebra of B1");
    int m = B1.dim();
    numdetail::memory_guard((long long)m * m * (m + 2));
    auto L = [&](const CMat& x) {
        CMat r(m, m);
        for (int k = 0; k < m; ++k) {
            CMat xb = x * B1.basis[k];
            for (int j = 0; j < m; ++j) r(j, k) = B1.inner(B1.basis[j], xb);
        }
        return r;
    };
    TowerLevel t;
    CMat V(m, B0.dim());
    for (int i = 0; i < B0.dim(); ++i) {
        // B0's basis is orthonormal in its own trace, which equals B1's here
        for (int j = 0; j < m; ++j) V(j, i) = B1.inner(B1.basis[j], B0.basis[i]);
    }
    t.e = V * V.adjoint();
    Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / m);
    t.tau = std::real(t.e.trace()) / m;
    // Markov: tr(xe) = tau tr(x) on B1
    std::vector<CMat> lifted;
    for (const auto& b : B1.basis) lifted.push_back(L(b));
    for (int i = 0; i < m; ++i) {
        std::complex<double> lhs = (lifted[i] * t.e).trace() / (double)m;
        if (std::abs(lhs - t.tau * B1.tr(B1.basis[i])) > 1e-9)
            throw std::runtime_error("non-Markov trace");
    }
    t.lower = make_algebra(m, lifted, w);
    std::vector<CMat> spanning = lifted;
    for (const auto& a : lifted)
        for (const auto& b : lifted) spanning.push_back(a * t.e * b);
    t.upper = make_algebra(m, spanning, w, false);
    // Jones relations
    if ((t.e - t.e.adjoint()).norm() > 1e-9 || (t.e * t.e - t.e).norm() > 1e-9)
        throw std::logic_error("Jones projection is not a selfadjoint idempotent");
    CondExp E = conditional_expectation(B1, B0);
    for (const auto& b : B1.basis)
        if ((t.e * L(b) * t.e - L(E(b)) * t.e).norm() > 1e-9)
            throw std::logic_error("exe = E(x)e fails");
    if (std::abs(std::real(t.e.trace()) / m - t.tau) > 1e-9)
        throw std::logic_error("tr(e) != tau");
    return t;
}

namespace numdetail {

struct CommutantProblem {
    std::vector<CMat> search_basis;   // orthonormal basis of the search algebra
    CMat generator;                   // a single matrix generating H Delta H*
};

// Builds the commuting-square tower data for a spin model and returns the
// search algebra A_{0,level} together with the embedded generator of H Delta H*.
inline CommutantProblem tower_problem(const HadamardMatrix& Hm, int level) {
    if (!collect_symbols(Hm.angles.a).empty())
        throw std::invalid_argument("rational-angle matrix required");
    if (!is_hadamard(Hm)) throw std::invalid_argument("not a Hadamard matrix");
    int n = Hm.n;
    if (level < 0 || level > 2) throw std::invalid_argument("level must be 0, 1 or 2");
    if (level == 1 && n > 16) throw std::length_error("level 1 limited to n <= 16");
    if (level == 2 && n > 6) throw std::length_error("level 2 limited to n <= 6");

    CMat H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = Hm.at(i, j).to_complex() / std::sqrt((double)n);
    Eigen::VectorXd diag(n);
    for (int i = 0; i < n; ++i) diag[i] = i + 1;
    CMat gen = H * diag.asDiagonal() * H.adjoint();   // generates H Delta H*

    CommutantProblem p;
    if (level == 0) {
        for (int i = 0; i < n; ++i) {
            CMat E = CMat::Zero(n, n);
            E(i, i) = 1;
            p.search_basis.push_back(E);
        }
        p.generator = gen;
        return p;
    }

    // level 1: ambient L^2(M_n); iota(x) = left multiplication in the E_ij
    // coordinates; e1 projects onto the span of H Delta H*
    int m1 = n * n;
    numdetail::memory_guard((long long)m1 * m1 * (n + 4));
    auto iota1 = [&](const CMat& x) {
        CMat r = CMat::Zero(m1, m1);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j) r(i * n + j, k * n + j) = x(i, k);
        return r;
    };
    CMat e1 = CMat::Zero(m1, m1);
    for (int i = 0; i < n; ++i) {
        CMat u = H.col(i) * H.col(i).adjoint();   // H E_ii H*, HS-orthonormal
        CVec w(m1);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) w[a * n + b] = u(a, b);
        e1 += w * w.adjoint();
    }
    std::vector<CMat> delta1;   // image of the diagonal algebra
    for (int i = 0; i < n; ++i) {
        CMat E = CMat::Zero(n, n);
        E(i, i) = 1;
        delta1.push_back(iota1(E));
    }
    SpanBuilder a02;
    for (const auto& a : delta1) a02.add(a);
    for (const auto& a : delta1)
        for (const auto& b : delta1) a02.add(a * e1 * b);
    if (level == 1) {
        for (size_t i = 0; i < a02.onb.size(); ++i)
            p.search_basis.push_back(a02.matrix(i, m1));
        p.generator = iota1(gen);
        return p;
    }

    // level 2: GNS of A12 = <M_n, e1>, next Jones projection onto L^2(M_n)
    SpanBuilder a12;
    std::vector<CMat> mn_units;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            CMat E = CMat::Zero(n, n);
            E(i, j) = 1;
            mn_units.push_back(iota1(E));
        }
    for (const auto& a : mn_units) a12.add(a);
    for (const auto& a : mn_units)
        for (const auto& b : mn_units) a12.add(a * e1 * b);
    int m2 = (int)a12.onb.size();
    numdetail::memory_guard((long long)m2 * m2 * (a02.onb.size() + 6) +
                            (long long)m2 * m2 * a02.onb.size() * a02.onb.size() / 8);
    auto iota2 = [&](const CMat& x) {
        CMat r(m2, m2);
        for (int k = 0; k < m2; ++k) {
            CVec c = a12.coords(x * a12.matrix(k, m1));
            r.col(k) = c;
        }
        return r;
    };
    // e2: projection onto the span of iota1(M_n) inside L^2(A12)
    SpanBuilder mn_coords;
    CMat e2 = CMat::Zero(m2, m2);
    {
        std::vector<CVec> cols;
        SpanBuilder tmp;
        for (const auto& a : mn_units) {
            CVec c = a12.coords(a);
            CMat cm = Eigen::Map<const CMat>(c.data(), m2, 1);
            if (tmp.add(cm)) cols.push_back(tmp.onb.back());
        }
        for (const auto& c : cols) e2 += c * c.adjoint();
    }
    std::vector<CMat> a02_lift;
    for (size_t i = 0; i < a02.onb.size(); ++i) a02_lift.push_back(iota2(a02.matrix(i, m1)));
    SpanBuilder a03;
    for (const auto& a : a02_lift) a03.add(a);
    for (const auto& a : a02_lift)
        for (const auto& b : a02_lift) a03.add(a * e2 * b);
    for (size_t i = 0; i < a03.onb.size(); ++i)
        p.search_basis.push_back(a03.matrix(i, m2));
    p.generator = iota2(iota1(gen));
    return p;
}

inline std::vector<CMat> commutant_basis(const CommutantProblem& p) {
    int m = (int)p.search_basis.size();
    int d = (int)p.search_basis[0].rows();
    memory_guard((long long)d * d * m);
    CMat K(d * d, m);
    for (int i = 0; i < m; ++i)
        K.col(i) = vecm(CMat(p.search_basis[i] * p.generator - p.generator * p.search_basis[i]));
    Eigen::SelfAdjointEigenSolver<CMat> es(K.adjoint() * K);
    Eigen::VectorXd sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    double cut = 1e-7 * std::max(1.0, sv.maxCoeff());
    std::vector<CMat> out;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > cut && sv[i] < 10 * cut)
            throw std::runtime_error("rank ambiguity: singular value inside the guard band");
        if (sv[i] <= cut) {
            CMat x = CMat::Zero(d, d);
            for (int j = 0; j < m; ++j) x += es.eigenvectors()(j, i) * p.search_basis[j];
            out.push_back(x);
        }
    }
    return out;
}

} // namespace numdetail

inline int relative_commutant_dims(const HadamardMatrix& Hm, int level) {
    return (int)numdetail::commutant_basis(numdetail::tower_problem(Hm, level)).size();
}

inline bool commutant_is_abelian(const HadamardMatrix& Hm) {
    auto basis = numdetail::commutant_basis(numdetail::tower_problem(Hm, 1));
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j)
            if ((basis[i] * basis[j] - basis[j] * basis[i]).norm() > 1e-7) return false;
    return true;
}

// The orientation of the compactness computation is pinned by executable
// oracles: level 0 is irreducible and level 1 recovers the group algebra for
// Fourier matrices.
inline void validate_orientation() {
    if (relative_commutant_dims(fourier_matrix(parse_group("Z2")), 0) != 1)
        throw std::logic_error("orientation ladder: level 0 must be irreducible");
    for (int n : {2, 3}) {
        if (relative_commutant_dims(fourier_matrix(parse_group("Z" + std::to_string(n))), 1) != n)
            throw std::logic_error("orientation ladder: level 1 must give the group algebra");
    }
}

} // namespace ttsub
