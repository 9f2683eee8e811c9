#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "ttsub/group.hpp"
#include "ttsub/phase.hpp"

namespace ttsub {

// Cyclotomic polynomial Phi_q as integer coefficients, by dividing x^q - 1 by
// the Phi_d of proper divisors.
inline std::vector<long long> cyclotomic(long long q) {
    static std::map<long long, std::vector<long long>> cache;
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    std::vector<long long> num(q + 1, 0);
    num[0] = -1; num[q] = 1;
    for (long long d = 1; d < q; ++d)
        if (q % d == 0) {
            auto phi_d = cyclotomic(d);
            // exact polynomial division num /= phi_d
            std::vector<long long> quot(num.size() - phi_d.size() + 1, 0);
            for (int i = (int)quot.size() - 1; i >= 0; --i) {
                long long c = num[i + phi_d.size() - 1] / phi_d.back();
                quot[i] = c;
                for (size_t j = 0; j < phi_d.size(); ++j) num[i + j] -= c * phi_d[j];
            }
            num = quot;
        }
    cache[q] = num;
    return num;
}

// Does a multiset of rational phases sum to zero?  Exact: reduce the counting
// polynomial modulo Phi_q.
inline bool rational_phases_sum_to_zero(const std::vector<Rat>& turns) {
    long long q = 1;
    for (const auto& t : turns) q = std::lcm(q, t.den);
    std::vector<long long> c(q, 0);
    for (const auto& t : turns) c[(t.mod1().num * (q / t.mod1().den)) % q] += 1;
    auto phi = cyclotomic(q);
    for (int i = (int)c.size() - 1; i >= (int)phi.size() - 1; --i)
        if (c[i]) {
            long long f = c[i] / phi.back();
            for (size_t j = 0; j < phi.size(); ++j) c[i - phi.size() + 1 + j] -= f * phi[j];
        }
    for (long long x : c)
        if (x) return false;
    return true;
}

// Deterministic sample values for irrational symbols (used whenever a phase
// with symbols must be rendered numerically).
inline std::map<int, double> default_symbol_values(const std::set<int>& ids) {
    std::map<int, double> v;
    for (int id : ids) {
        double x = std::fmod(0.33988749894 + id * 0.61803398874989484820, 1.0);
        v[id] = x;
    }
    return v;
}

inline std::set<int> collect_symbols(const std::vector<Phase>& ps) {
    std::set<int> ids;
    for (const auto& p : ps)
        for (const auto& [id, c] : p.irr) ids.insert(id);
    return ids;
}

// An n x n complex Hadamard matrix stored by its phase angles; the actual
// entry is n^{-1/2} e^{2 pi i angle}.
struct HadamardMatrix {
    int n = 0;
    PhaseArray angles;

    HadamardMatrix() = default;
    explicit HadamardMatrix(PhaseArray a) : n(a.rows), angles(std::move(a)) {
        if (angles.rows != angles.cols) throw std::invalid_argument("Hadamard matrix must be square");
    }

    const Phase& at(int i, int j) const { return angles.at(i, j); }
};

inline bool is_hadamard(const HadamardMatrix& m) {
    auto symbols = collect_symbols(m.angles.a);
    if (symbols.empty()) {
        for (int i = 0; i < m.n; ++i)
            for (int j = i + 1; j < m.n; ++j) {
                std::vector<Rat> turns;
                for (int k = 0; k < m.n; ++k)
                    turns.push_back((m.at(i, k) * m.at(j, k).conj()).turn);
                if (!rational_phases_sum_to_zero(turns)) return false;
            }
        return true;
    }
    auto vals = default_symbol_values(symbols);
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) {
            std::complex<double> s = 0;
            for (int k = 0; k < m.n; ++k)
                s += (m.at(i, k) * m.at(j, k).conj()).to_complex(vals);
            if (std::abs(s) > 1e-9 * m.n) return false;
        }
    return true;
}

// (H_G)_{ij} = rho_j(i), rows/columns indexed by elements of G.
inline HadamardMatrix fourier_matrix(const FinGroup& g) {
    PhaseArray a(g.order, g.order);
    for (int i = 0; i < g.order; ++i)
        for (int j = 0; j < g.order; ++j)
            a.at(i, j) = character(g, j, i);
    return HadamardMatrix(std::move(a));
}

inline HadamardMatrix conj_transpose(const HadamardMatrix& m) {
    PhaseArray a(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j)
            a.at(i, j) = m.at(j, i).conj();
    return HadamardMatrix(std::move(a));
}

// H_{ij,kl} = (H1)_{ik} (H2)_{jl} T_{il}; row index (i,j), column (k,l),
// i,k over H and j,l over K, K fastest.
inline HadamardMatrix twisted_tensor(const HadamardMatrix& h1, const HadamardMatrix& h2,
                                     const PhaseArray& twist) {
    if (twist.rows != h1.n || twist.cols != h2.n)
        throw std::invalid_argument("twist size mismatch");
    int nh = h1.n, nk = h2.n, n = nh * nk;
    PhaseArray a(n, n);
    for (int i = 0; i < nh; ++i)
        for (int j = 0; j < nk; ++j)
            for (int k = 0; k < nh; ++k)
                for (int l = 0; l < nk; ++l)
                    a.at(i * nk + j, k * nk + l) = h1.at(i, k) * h2.at(j, l) * twist.at(i, l);
    return HadamardMatrix(std::move(a));
}

// The paper's standing convention: H1 is the conjugate transpose of the
// Fourier matrix of H, H2 the Fourier matrix of K.
inline HadamardMatrix twisted_tensor_standard(const FinGroup& H, const FinGroup& K,
                                              const PhaseArray& twist) {
    return twisted_tensor(conj_transpose(fourier_matrix(H)), fourier_matrix(K), twist);
}

// Dephase: divide row i by entry (i,0) and then column j by entry (0,j); the
// invariant cross-ratio matrix.
inline PhaseArray dephase(const PhaseArray& m) { return m.standardized(); }

namespace detail {

inline std::vector<Phase> sorted_row(const PhaseArray& m, int r) {
    std::vector<Phase> v;
    for (int c = 0; c < m.cols; ++c) v.push_back(m.at(r, c));
    std::sort(v.begin(), v.end());
    return v;
}

// Multiset of column vectors, sorted.
inline std::vector<std::vector<Phase>> column_multiset(const PhaseArray& m) {
    std::vector<std::vector<Phase>> cols(m.cols);
    for (int c = 0; c < m.cols; ++c)
        for (int r = 0; r < m.rows; ++r) cols[c].push_back(m.at(r, c));
    std::sort(cols.begin(), cols.end());
    return cols;
}

} // namespace detail

// Equivalence under row/column permutations and unit scalings; search-based,
// bounded size.
inline bool hadamard_equivalent(const HadamardMatrix& A, const HadamardMatrix& B, int bound = 8) {
    if (A.n != B.n) return false;
    int n = A.n;
    if (n > bound) throw std::invalid_argument("hadamard_equivalent: size exceeds bound");
    PhaseArray Ad = dephase(A.angles);
    auto a_cols = detail::column_multiset(Ad);
    std::vector<std::vector<Phase>> a_rows_sorted(n);
    for (int i = 0; i < n; ++i) a_rows_sorted[i] = detail::sorted_row(Ad, i);

    // anchor: which row/column of B lands in position (0,0) before dephasing
    for (int r0 = 0; r0 < n; ++r0)
        for (int c0 = 0; c0 < n; ++c0) {
            // dephased B relative to the anchor (rows/cols not yet ordered)
            PhaseArray Bd(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    Bd.at(i, j) = B.at(i, j) * B.at(r0, c0) * B.at(i, c0).conj() * B.at(r0, j).conj();
            // row r0 of Bd is all ones and must map to row 0 of Ad (all ones)
            std::vector<std::vector<int>> cand(n);
            bool feasible = true;
            std::vector<std::vector<Phase>> b_rows_sorted(n);
            for (int i = 0; i < n; ++i) b_rows_sorted[i] = detail::sorted_row(Bd, i);
            for (int pos = 0; pos < n; ++pos) {
                for (int src = 0; src < n; ++src) {
                    if ((src == r0) != (pos == 0)) continue;
                    if (b_rows_sorted[src] == a_rows_sorted[pos]) cand[pos].push_back(src);
                }
                if (cand[pos].empty()) { feasible = false; break; }
            }
            if (!feasible) continue;
            std::vector<int> assign(n, -1);
            std::vector<char> used(n, 0);
            std::function<bool(int)> rec = [&](int pos) -> bool {
                if (pos == n) {
                    PhaseArray P(n, n);
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) P.at(i, j) = Bd.at(assign[i], j);
                    return detail::column_multiset(P) == a_cols;
                }
                for (int src : cand[pos]) {
                    if (used[src]) continue;
                    used[src] = 1; assign[pos] = src;
                    if (rec(pos + 1)) return true;
                    used[src] = 0;
                }
                return false;
            };
            if (rec(0)) return true;
        }
    return false;
}

// Lines of '+'/'-' characters.
inline HadamardMatrix parse_real_hadamard(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') { if (!cur.empty()) lines.push_back(cur); cur.clear(); }
        else if (!isspace(static_cast<unsigned char>(ch))) cur.push_back(ch);
    }
    if (!cur.empty()) lines.push_back(cur);
    int n = (int)lines.size();
    if (n == 0) throw std::invalid_argument("empty matrix text");
    PhaseArray a(n, n);
    for (int i = 0; i < n; ++i) {
        if ((int)lines[i].size() != n) throw std::invalid_argument("matrix text not square");
        for (int j = 0; j < n; ++j) {
            if (lines[i][j] == '+') a.at(i, j) = Phase();
            else if (lines[i][j] == '-') a.at(i, j) = Phase(Rat(1, 2));
            else throw std::invalid_argument("invalid character in matrix text");
        }
    }
    HadamardMatrix m(std::move(a));
    if (!is_hadamard(m)) throw std::invalid_argument("NotHadamard: rows are not orthogonal");
    return m;
}

// One row per line, comma-separated phase literals.
inline HadamardMatrix parse_complex_hadamard(const std::string& text) {
    std::vector<std::vector<Phase>> rows;
    std::string line;
    auto flush_line = [&]() {
        if (line.find_first_not_of(" \t\r") == std::string::npos) { line.clear(); return; }
        std::vector<Phase> row;
        std::string tok;
        for (char ch : line + ",") {
            if (ch == ',') { row.push_back(parse_phase(tok)); tok.clear(); }
            else tok.push_back(ch);
        }
        rows.push_back(std::move(row));
        line.clear();
    };
    for (char ch : text) {
        if (ch == '\n') flush_line();
        else line.push_back(ch);
    }
    flush_line();
    int n = (int)rows.size();
    if (n == 0) throw std::invalid_argument("empty matrix text");
    PhaseArray a(n, n);
    for (int i = 0; i < n; ++i) {
        if ((int)rows[i].size() != n) throw std::invalid_argument("matrix text not square");
        for (int j = 0; j < n; ++j) a.at(i, j) = rows[i][j];
    }
    HadamardMatrix m(std::move(a));
    if (!is_hadamard(m)) throw std::invalid_argument("NotHadamard: rows are not orthogonal");
    return m;
}

inline std::string format_complex_hadamard(const HadamardMatrix& m) {
    std::string out;
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) {
            if (j) out += ", ";
            out += m.at(i, j).str();
        }
        out += "\n";
    }
    return out;
}

} // namespace ttsub
