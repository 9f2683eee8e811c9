#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ttsub/phase.hpp"
#include "ttsub/smith.hpp"

namespace ttsub {

// A finite group: abelian in invariant-factor form (elements are mixed-radix
// tuples) or an arbitrary Cayley-table group.  A full multiplication table is
// kept in both cases.
struct FinGroup {
    int order = 1;
    std::vector<std::vector<int>> cayley;   // cayley[a][b] = a*b
    std::vector<int> inv;
    int id = 0;
    bool abelian = true;
    std::vector<long long> factors;   // invariant factors when abelian
    std::string name = "Z1";

    int mul(int a, int b) const { return cayley[a][b]; }

    // tuple <-> index for abelian groups (mixed radix, last factor fastest)
    std::vector<long long> tuple(int idx) const {
        std::vector<long long> t(factors.size());
        for (int i = (int)factors.size() - 1; i >= 0; --i) {
            t[i] = idx % factors[i];
            idx /= (int)factors[i];
        }
        return t;
    }
    int index(const std::vector<long long>& t) const {
        int idx = 0;
        for (size_t i = 0; i < factors.size(); ++i)
            idx = idx * (int)factors[i] + int(((t[i] % factors[i]) + factors[i]) % factors[i]);
        return idx;
    }

    bool is_abelian_table() const {
        for (int a = 0; a < order; ++a)
            for (int b = a + 1; b < order; ++b)
                if (cayley[a][b] != cayley[b][a]) return false;
        return true;
    }

    int element_order(int g) const {
        int n = 1, x = g;
        while (x != id) { x = mul(x, g); ++n; }
        return n;
    }

    void finish_tables() {
        inv.assign(order, -1);
        // identity
        id = -1;
        for (int e = 0; e < order && id < 0; ++e) {
            bool ok = true;
            for (int a = 0; a < order; ++a)
                if (cayley[e][a] != a || cayley[a][e] != a) { ok = false; break; }
            if (ok) id = e;
        }
        if (id < 0) throw std::invalid_argument("Cayley table has no identity");
        for (int a = 0; a < order; ++a)
            for (int b = 0; b < order; ++b)
                if (cayley[a][b] == id) inv[a] = b;
        for (int a = 0; a < order; ++a)
            if (inv[a] < 0) throw std::invalid_argument("Cayley table has no inverse for some element");
    }

    void validate_table() const {
        for (int a = 0; a < order; ++a) {
            std::vector<char> seen_r(order, 0), seen_c(order, 0);
            for (int b = 0; b < order; ++b) {
                int r = cayley[a][b], c = cayley[b][a];
                if (r < 0 || r >= order || seen_r[r] || c < 0 || c >= order || seen_c[c])
                    throw std::invalid_argument("Cayley table is not a Latin square");
                seen_r[r] = seen_c[c] = 1;
            }
        }
        for (int a = 0; a < order; ++a)
            for (int b = 0; b < order; ++b)
                for (int c = 0; c < order; ++c)
                    if (cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]])
                        throw std::invalid_argument("Cayley table is not associative");
    }

    // Z_{n1} x ... x Z_{nr}, normalized to invariant factors.
    static FinGroup from_factors(std::vector<long long> fs) {
        // normalize: SNF of diag(fs) gives the invariant-factor chain
        fs.erase(std::remove(fs.begin(), fs.end(), 1LL), fs.end());
        if (!fs.empty()) {
            IMat d(fs.size(), std::vector<long long>(fs.size(), 0));
            for (size_t i = 0; i < fs.size(); ++i) d[i][i] = fs[i];
            auto sm = smith_normal_form(d);
            fs.clear();
            for (long long x : sm.diag)
                if (x > 1) fs.push_back(x);
        }
        FinGroup g;
        g.abelian = true;
        g.factors = fs;
        long long n = 1;
        for (long long f : fs) n *= f;
        g.order = (int)n;
        g.cayley.assign(g.order, std::vector<int>(g.order));
        for (int a = 0; a < g.order; ++a)
            for (int b = 0; b < g.order; ++b) {
                auto ta = g.tuple(a), tb = g.tuple(b);
                for (size_t i = 0; i < fs.size(); ++i) ta[i] = (ta[i] + tb[i]) % fs[i];
                g.cayley[a][b] = g.index(ta);
            }
        g.finish_tables();
        g.name = fs.empty() ? "Z1" : "";
        for (size_t i = 0; i < fs.size(); ++i)
            g.name += (i ? "x" : "") + ("Z" + std::to_string(fs[i]));
        return g;
    }

    static FinGroup from_table(std::vector<std::vector<int>> t) {
        FinGroup g;
        g.order = (int)t.size();
        g.cayley = std::move(t);
        for (const auto& row : g.cayley)
            if ((int)row.size() != g.order) throw std::invalid_argument("Cayley table not square");
        g.validate_table();
        g.finish_tables();
        g.abelian = g.is_abelian_table();
        g.name = "table" + std::to_string(g.order);
        return g;
    }

    static FinGroup symmetric(int n) {
        if (n < 1 || n > 5) throw std::invalid_argument("symmetric group supported for n <= 5");
        std::vector<std::vector<int>> perms;
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        do perms.push_back(p); while (std::next_permutation(p.begin(), p.end()));
        std::map<std::vector<int>, int> idx;
        for (size_t i = 0; i < perms.size(); ++i) idx[perms[i]] = (int)i;
        int m = (int)perms.size();
        std::vector<std::vector<int>> t(m, std::vector<int>(m));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                std::vector<int> c(n);   // (a*b)(x) = a(b(x))
                for (int x = 0; x < n; ++x) c[x] = perms[a][perms[b][x]];
                t[a][b] = idx[c];
            }
        FinGroup g = from_table(std::move(t));
        g.name = "S" + std::to_string(n);
        return g;
    }
};

// "Z4", "Z2xZ2", "S3"
inline FinGroup parse_group(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty group literal");
    if (text[0] == 'S') return FinGroup::symmetric(std::stoi(text.substr(1)));
    std::vector<long long> fs;
    size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != 'Z') throw std::invalid_argument("bad group literal: '" + text + "'");
        size_t end = text.find('x', pos);
        std::string num = text.substr(pos + 1, end == std::string::npos ? end : end - pos - 1);
        if (num.empty()) throw std::invalid_argument("bad group literal: '" + text + "'");
        fs.push_back(std::stoll(num));
        if (fs.back() < 1) throw std::invalid_argument("bad group literal: '" + text + "'");
        pos = end == std::string::npos ? text.size() : end + 1;
    }
    return FinGroup::from_factors(fs);
}

// rho_g(x) = sum_i g_i x_i / n_i as a rational Phase; abelian groups only.
inline Phase character(const FinGroup& g, int chi, int x) {
    if (!g.abelian) throw std::invalid_argument("characters: abelian group required");
    auto tc = g.tuple(chi), tx = g.tuple(x);
    Rat turn(0);
    for (size_t i = 0; i < g.factors.size(); ++i)
        turn = turn + Rat(tc[i] * tx[i], g.factors[i]);
    return Phase(turn);
}

// Minimal-ish generating set by greedy closure growth.
inline std::vector<int> generating_set(const FinGroup& g) {
    std::vector<int> gens;
    std::vector<char> in(g.order, 0);
    in[g.id] = 1;
    int covered = 1;
    while (covered < g.order) {
        int pick = -1;
        for (int x = 0; x < g.order; ++x)
            if (!in[x]) { pick = x; break; }
        gens.push_back(pick);
        // closure of current generators
        std::vector<int> frontier{pick};
        in[pick] = 1; ++covered;
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int a : frontier)
                for (int b = 0; b < g.order; ++b)
                    if (in[b]) {
                        for (int c : {g.mul(a, b), g.mul(b, a)})
                            if (!in[c]) { in[c] = 1; ++covered; next.push_back(c); }
                    }
            frontier = std::move(next);
        }
    }
    return gens;
}

// Express every element as a word in the generators (BFS), for transporting
// generator images to full maps.
inline std::vector<std::vector<int>> generator_words(const FinGroup& g, const std::vector<int>& gens) {
    std::vector<std::vector<int>> word(g.order);
    std::vector<char> seen(g.order, 0);
    seen[g.id] = 1;
    std::vector<int> frontier{g.id};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int a : frontier)
            for (size_t gi = 0; gi < gens.size(); ++gi) {
                int b = g.mul(a, gens[gi]);
                if (!seen[b]) {
                    seen[b] = 1;
                    word[b] = word[a];
                    word[b].push_back((int)gi);
                    next.push_back(b);
                }
            }
        frontier = std::move(next);
    }
    return word;
}

// All automorphisms as permutations of element indices; brute force over
// generator images, order-preserving candidates only.
inline std::vector<std::vector<int>> automorphisms(const FinGroup& g, int bound = 16) {
    if (g.order > bound) throw std::invalid_argument("automorphisms: group order exceeds bound");
    std::vector<int> gens = generating_set(g);
    auto words = generator_words(g, gens);
    std::vector<int> ord(g.order);
    for (int x = 0; x < g.order; ++x) ord[x] = g.element_order(x);

    std::vector<std::vector<int>> result;
    std::vector<int> img(gens.size(), -1);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == gens.size()) {
            std::vector<int> phi(g.order);
            std::vector<char> hit(g.order, 0);
            for (int x = 0; x < g.order; ++x) {
                int v = g.id;
                for (int gi : words[x]) v = g.mul(v, img[gi]);
                phi[x] = v;
                if (hit[v]) return;
                hit[v] = 1;
            }
            for (int a = 0; a < g.order; ++a)
                for (int b = 0; b < g.order; ++b)
                    if (phi[g.mul(a, b)] != g.mul(phi[a], phi[b])) return;
            result.push_back(std::move(phi));
            return;
        }
        for (int cand = 0; cand < g.order; ++cand)
            if (ord[cand] == ord[gens[i]]) {
                img[i] = cand;
                rec(i + 1);
            }
    };
    rec(0);
    return result;
}

// Invariant factors of a finite abelian group given only its multiplication
// law, by counting solutions of x^{p^k} = e prime by prime.
inline AbelianStructure abelian_invariants(int order, const std::function<int(int, int)>& mul, int id) {
    AbelianStructure st;
    if (order <= 1) return st;
    std::map<long long, std::vector<int>> partitions;   // prime -> partition (descending exponents)
    long long n = order;
    for (long long p = 2; p * p <= n || n > 1; ++p) {
        if (p * p > n && n > 1) p = n;
        if (n % p) continue;
        while (n % p == 0) n /= p;
        // c_k = #solutions of x^{p^k} = e; a_k = log_p c_k; lambda has
        // #(parts >= k) = a_k - a_{k-1}
        std::vector<int> a{0};
        std::vector<int> pw(order);   // current x^{p^k}
        for (int x = 0; x < order; ++x) pw[x] = x;
        while (true) {
            for (int x = 0; x < order; ++x) {
                int y = id;   // pw[x]^p
                for (long long j = 0; j < p; ++j) y = mul(y, pw[x]);
                pw[x] = y;
            }
            int c = 0;
            for (int x = 0; x < order; ++x) c += (pw[x] == id);
            int ak = 0;
            long long t = c;
            while (t > 1) { t /= p; ++ak; }
            a.push_back(ak);
            if (a.back() == a[a.size() - 2]) break;
        }
        std::vector<int> part;
        for (size_t k = 1; k < a.size(); ++k) {
            int cnt = a[k] - a[k - 1];   // number of parts >= k
            for (int i = 0; i < cnt; ++i) {
                if ((int)part.size() <= i) part.push_back(0);
                part[i] = (int)k;
            }
        }
        partitions[p] = part;
    }
    // combine into invariant-factor chain d1 | d2 | ... (largest last)
    size_t len = 0;
    for (auto& [p, part] : partitions) len = std::max(len, part.size());
    std::vector<long long> inv(len, 1);
    for (auto& [p, part] : partitions)
        for (size_t i = 0; i < part.size(); ++i) {
            long long f = 1;
            for (int j = 0; j < part[i]; ++j) f *= p;
            inv[i] *= f;
        }
    std::sort(inv.begin(), inv.end());
    st.torsion = inv;
    return st;
}

} // namespace ttsub
