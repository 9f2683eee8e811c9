#pragma once

#include <cstdlib>
#include <set>
#include <vector>

#include "ttsub/phase.hpp"

namespace ttsub {

using IMat = std::vector<std::vector<long long>>;

inline IMat imat_identity(int n) {
    IMat m(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IMat imat_mul(const IMat& a, const IMat& b) {
    int n = (int)a.size(), k = n ? (int)a[0].size() : 0, m = k ? (int)b[0].size() : 0;
    IMat r(n, std::vector<long long>(m, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            if (a[i][j])
                for (int l = 0; l < m; ++l) r[i][l] += a[i][j] * b[j][l];
    return r;
}

struct SmithResult {
    IMat u, s, v;   // u*m*v = s, u and v unimodular, s diagonal with d1|d2|...
    int rank = 0;
    std::vector<long long> diag;   // nonzero diagonal entries
};

// Smith normal form by row/column reduction with transform tracking.
inline SmithResult smith_normal_form(IMat m) {
    int nr = (int)m.size(), nc = nr ? (int)m[0].size() : 0;
    SmithResult res;
    res.u = imat_identity(nr);
    res.v = imat_identity(nc);
    if (nc == 0 || nr == 0) { res.s = m; return res; }

    auto row_op = [&](int i, int j, long long q) {   // row i -= q*row j
        for (int c = 0; c < nc; ++c) m[i][c] -= q * m[j][c];
        for (int c = 0; c < nr; ++c) res.u[i][c] -= q * res.u[j][c];
    };
    auto col_op = [&](int i, int j, long long q) {   // col i -= q*col j
        for (int r = 0; r < nr; ++r) m[r][i] -= q * m[r][j];
        for (int r = 0; r < nc; ++r) res.v[r][i] -= q * res.v[r][j];
    };
    auto row_swap = [&](int i, int j) { std::swap(m[i], m[j]); std::swap(res.u[i], res.u[j]); };
    auto col_swap = [&](int i, int j) {
        for (int r = 0; r < nr; ++r) std::swap(m[r][i], m[r][j]);
        for (int r = 0; r < nc; ++r) std::swap(res.v[r][i], res.v[r][j]);
    };

    int t = 0;
    while (t < nr && t < nc) {
        // find pivot: nonzero entry of smallest absolute value in m[t..][t..]
        int pi = -1, pj = -1;
        long long best = 0;
        for (int i = t; i < nr; ++i)
            for (int j = t; j < nc; ++j)
                if (m[i][j] != 0 && (pi < 0 || std::llabs(m[i][j]) < best)) {
                    best = std::llabs(m[i][j]); pi = i; pj = j;
                }
        if (pi < 0) break;
        row_swap(t, pi); col_swap(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < nr; ++i)
                if (m[i][t] != 0) {
                    long long q = m[i][t] / m[t][t];
                    row_op(i, t, q);
                    if (m[i][t] != 0) { row_swap(t, i); clean = false; }
                }
            for (int j = t + 1; j < nc; ++j)
                if (m[t][j] != 0) {
                    long long q = m[t][j] / m[t][t];
                    col_op(j, t, q);
                    if (m[t][j] != 0) { col_swap(t, j); clean = false; }
                }
        }
        // divisibility: fold in any entry the pivot does not divide
        bool redo = false;
        for (int i = t + 1; i < nr && !redo; ++i)
            for (int j = t + 1; j < nc && !redo; ++j)
                if (m[i][j] % m[t][t] != 0) {
                    row_op(t, i, -1);   // add row i to row t
                    redo = true;
                }
        if (redo) continue;
        if (m[t][t] < 0) {
            for (int c = 0; c < nc; ++c) m[t][c] = -m[t][c];
            for (int c = 0; c < nr; ++c) res.u[t][c] = -res.u[t][c];
        }
        ++t;
    }
    res.s = m;
    res.rank = t;
    for (int i = 0; i < t; ++i) res.diag.push_back(m[i][i]);
    return res;
}

// Invariant factors d1 | d2 | ... | ds plus free rank.
struct AbelianStructure {
    std::vector<long long> torsion;   // each >= 2, divisibility chain
    int free_rank = 0;

    long long torsion_order() const {
        long long o = 1;
        for (long long d : torsion) o *= d;
        return o;
    }
    bool finite() const { return free_rank == 0; }
    bool trivial() const { return torsion.empty() && free_rank == 0; }

    std::string str() const {
        if (trivial()) return "1";
        std::string s;
        for (long long d : torsion) {
            if (!s.empty()) s += " x ";
            s += "Z" + std::to_string(d);
        }
        for (int i = 0; i < free_rank; ++i) {
            if (!s.empty()) s += " x ";
            s += "Z";
        }
        return s;
    }
    friend bool operator==(const AbelianStructure& a, const AbelianStructure& b) {
        return a.torsion == b.torsion && a.free_rank == b.free_rank;
    }
};

// Structure of Z^k modulo the lattice spanned by the given rows.
inline AbelianStructure quotient_structure(int k, const IMat& relations) {
    AbelianStructure st;
    if (relations.empty()) { st.free_rank = k; return st; }
    SmithResult sm = smith_normal_form(relations);
    for (long long d : sm.diag)
        if (d > 1) st.torsion.push_back(d);
    st.free_rank = k - sm.rank;
    return st;
}

// Structure of the subgroup of (R/Z)^m generated by vectors of Phases.
// Rational turns live in Q/Z; irrational-symbol coefficients contribute free
// rank after integer-lattice reduction.  The relation lattice of Z^k (k =
// number of generators) is cut out by (1) vanishing of all symbol
// coefficients and (2) integrality of the rational parts.
inline AbelianStructure subgroup_structure(const std::vector<std::vector<Phase>>& gens) {
    int k = (int)gens.size();
    if (k == 0) return AbelianStructure{};
    int m = (int)gens[0].size();

    std::set<int> symbol_set;
    for (const auto& g : gens)
        for (const auto& p : g)
            for (const auto& [id, c] : p.irr) symbol_set.insert(id);
    std::vector<int> symbols(symbol_set.begin(), symbol_set.end());

    // (1) integer kernel of the symbol-coefficient matrix
    IMat kernel_basis;   // rows span {a : sum_i a_i * coeffs_i = 0}
    if (symbols.empty()) {
        kernel_basis = imat_identity(k);
    } else {
        int nc = m * (int)symbols.size();
        // clear denominators column-wise
        IMat c(k, std::vector<long long>(nc, 0));
        for (int col = 0; col < nc; ++col) {
            int coord = col / (int)symbols.size();
            int sym = symbols[col % (int)symbols.size()];
            long long lcm = 1;
            for (int i = 0; i < k; ++i) {
                auto it = gens[i][coord].irr.find(sym);
                if (it != gens[i][coord].irr.end()) lcm = std::lcm(lcm, it->second.den);
            }
            for (int i = 0; i < k; ++i) {
                auto it = gens[i][coord].irr.find(sym);
                if (it != gens[i][coord].irr.end()) c[i][col] = it->second.num * (lcm / it->second.den);
            }
        }
        SmithResult sm = smith_normal_form(c);
        // a*c = 0 iff (a*u^-1) has support on zero-diagonal rows of s;
        // with u*c*v = s the kernel is spanned by rows of u past the rank.
        for (int i = sm.rank; i < k; ++i) kernel_basis.push_back(sm.u[i]);
    }
    int kp = (int)kernel_basis.size();
    if (kp == 0) { AbelianStructure st; st.free_rank = k; return st; }   // no relations at all

    // (2) integrality of rational parts within the kernel lattice
    long long denom = 1;
    for (const auto& g : gens)
        for (const auto& p : g) denom = std::lcm(denom, p.turn.den);
    IMat scaled(kp, std::vector<long long>(m, 0));   // denom * (kernel_basis * turns)
    for (int i = 0; i < kp; ++i)
        for (int j = 0; j < m; ++j) {
            long long acc = 0;
            for (int l = 0; l < k; ++l)
                acc += kernel_basis[i][l] * (gens[l][j].turn.num * (denom / gens[l][j].turn.den));
            scaled[i][j] = acc;
        }
    SmithResult sm2 = smith_normal_form(scaled);
    // b*scaled = 0 mod denom  <=>  (b*u2^-1) diag-scaled; multiplier per row:
    std::vector<long long> mult(kp, 1);
    for (int i = 0; i < (int)sm2.diag.size(); ++i)
        mult[i] = denom / std::gcd(sm2.diag[i], denom);

    IMat relations(kp, std::vector<long long>(k, 0));
    for (int i = 0; i < kp; ++i)
        for (int j = 0; j < k; ++j) {
            long long acc = 0;
            for (int l = 0; l < kp; ++l) acc += sm2.u[i][l] * kernel_basis[l][j];
            relations[i][j] = mult[i] * acc;
        }
    return quotient_structure(k, relations);
}

} // namespace ttsub
