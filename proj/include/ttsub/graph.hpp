#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ttsub/quotient.hpp"

namespace ttsub {

// Bipartite principal-graph data.  Odd vertices are indexed by N (double
// cosets HnK); even vertices come in clusters, one cluster per H-H double
// coset, with every vertex of a cluster sharing all edges.
struct EvenCluster {
    std::string label;
    int size = 1;   // number of interchangeable vertices
    int dim = 1;    // dimension attached to each vertex
};

struct BipartiteGraph {
    std::vector<std::string> odd_labels;
    std::vector<char> odd_boundary;          // truncated graphs: incomplete vertices
    std::vector<EvenCluster> clusters;
    // mult[o][c]: multiplicity of the edge from odd o to each vertex of cluster c
    std::vector<std::map<int, int>> mult;
    int dist_cluster = 0;   // cluster of the trivial double coset; vertex 0 starred
    int dist_odd = 0;
    bool connected = true;
    bool truncated = false;

    int even_count() const {
        int n = 0;
        for (const auto& c : clusters) n += c.size;
        return n;
    }
    int odd_count() const { return (int)odd_labels.size(); }

    // number of distinct even neighbours of an odd vertex
    int neighbor_count(int o) const {
        int n = 0;
        for (const auto& [c, m] : mult[o]) n += clusters[c].size;
        return n;
    }
    // sum over incident even vertices of multiplicity x dimension
    long long degree_sum(int o) const {
        long long s = 0;
        for (const auto& [c, m] : mult[o])
            s += (long long)m * clusters[c].size * clusters[c].dim;
        return s;
    }
};

// hgk = g forces h = k = 1.
inline bool local_freeness(const QuotientGroup& q) {
    for (int h = 0; h < q.H.order; ++h)
        for (int k = 0; k < q.K.order; ++k) {
            if (h == q.H.id && k == q.K.id) continue;
            int he = q.encode(h, q.K.id, 0), ke = q.encode(q.H.id, k, 0);
            for (int g = 0; g < q.order; ++g)
                if (q.mul(q.mul(he, g), ke) == g) return false;
        }
    return true;
}

namespace detail {

// Principal graph with the roles of the two side groups abstracted: "A" plays
// H (even double cosets A g A) and "B" plays K (odd cosets A n B, edge steps).
inline BipartiteGraph coset_graph(const QuotientGroup& q, bool a_is_h) {
    if (!q.finite) throw std::invalid_argument("coset graph requires a finite group");
    if (!local_freeness(q)) throw std::runtime_error("NotLocallyFree");
    int n = (int)q.order;
    int asz = a_is_h ? q.H.order : q.K.order;
    int bsz = a_is_h ? q.K.order : q.H.order;
    auto a_elem = [&](int i) {
        return a_is_h ? q.encode(i, q.K.id, 0) : q.encode(q.H.id, i, 0);
    };
    auto b_elem = [&](int i) {
        return a_is_h ? q.encode(q.H.id, i, 0) : q.encode(i, q.K.id, 0);
    };

    // A-A double cosets
    std::vector<int> coset(n, -1);
    std::vector<int> coset_min;          // canonical representative, ordering key
    std::vector<int> coset_size;
    for (int g = 0; g < n; ++g) {
        if (coset[g] >= 0) continue;
        int id = (int)coset_min.size();
        std::set<int> members;
        for (int i = 0; i < asz; ++i)
            for (int j = 0; j < asz; ++j)
                members.insert(q.mul(q.mul(a_elem(i), g), a_elem(j)));
        for (int m : members) coset[m] = id;
        coset_min.push_back(*members.begin());
        coset_size.push_back((int)members.size());
    }

    BipartiteGraph bg;
    long long total = 0;
    for (size_t c = 0; c < coset_min.size(); ++c) {
        int p = coset_size[c] / asz;     // single cosets gA inside AgA
        if (p * asz != coset_size[c] || asz % p != 0)
            throw std::runtime_error("NonIntegerCluster");
        auto [h, k, nn] = q.decode(coset_min[c]);
        EvenCluster ec;
        ec.label = "D[" + std::to_string(h) + "," + std::to_string(k) + "," +
                   std::to_string(nn) + "]";
        ec.size = asz / p;
        ec.dim = p;
        bg.clusters.push_back(ec);
        total += coset_size[c];
    }
    if (total != q.order) throw std::logic_error("double cosets do not partition the group");
    bg.dist_cluster = coset[q.id()];

    // odd vertices and edges
    bg.odd_labels.resize(q.nn);
    bg.odd_boundary.assign(q.nn, 0);
    bg.mult.resize(q.nn);
    for (int i = 0; i < q.nn; ++i) {
        bg.odd_labels[i] = "N" + std::to_string(i);
        int ne = q.encode(q.H.id, q.K.id, i);
        std::set<int> seen;
        for (int b = 0; b < bsz; ++b) {
            int c = coset[q.mul(ne, b_elem(b))];
            // disjointness of the cosets A(nb)A over distinct b (paper's
            // local-freeness consequence); aggregation would still be sound
            if (!seen.insert(c).second)
                throw std::logic_error("coinciding double cosets under local freeness");
            bg.mult[i][c] += 1;
        }
        if (bg.degree_sum(i) != (long long)asz * bsz)
            throw std::logic_error("degree sum rule violated");
    }
    bg.dist_odd = 0;

    // connectivity over the odd/cluster incidence
    std::vector<char> ov(q.nn, 0), cv(bg.clusters.size(), 0);
    std::vector<int> stack = {0};
    ov[0] = 1;
    while (!stack.empty()) {
        int o = stack.back();
        stack.pop_back();
        for (const auto& [c, m] : bg.mult[o]) {
            if (cv[c]) continue;
            cv[c] = 1;
            for (int o2 = 0; o2 < q.nn; ++o2)
                if (!ov[o2] && bg.mult[o2].count(c)) { ov[o2] = 1; stack.push_back(o2); }
        }
    }
    bg.connected = std::count(ov.begin(), ov.end(), (char)1) == q.nn &&
                   std::count(cv.begin(), cv.end(), (char)1) == (long long)bg.clusters.size();
    return bg;
}

} // namespace detail

inline BipartiteGraph principal_graph(const QuotientGroup& q) {
    return detail::coset_graph(q, true);
}

inline BipartiteGraph dual_graph(const QuotientGroup& q) {
    return detail::coset_graph(q, false);
}

// Loop counts at the starred even vertex: level 0 counts length-2 loops,
// level 1 counts length-4 loops.
inline long long predicted_commutant_dims(const BipartiteGraph& g, int level) {
    int v = g.dist_cluster;
    if (level == 0) {
        long long s = 0;
        for (int o = 0; o < g.odd_count(); ++o) {
            auto it = g.mult[o].find(v);
            if (it != g.mult[o].end()) s += (long long)it->second * it->second;
        }
        return s;
    }
    if (level != 1) throw std::invalid_argument("level must be 0 or 1");
    long long s = 0;
    for (int o1 = 0; o1 < g.odd_count(); ++o1) {
        auto i1 = g.mult[o1].find(v);
        if (i1 == g.mult[o1].end()) continue;
        for (int o2 = 0; o2 < g.odd_count(); ++o2) {
            auto i2 = g.mult[o2].find(v);
            if (i2 == g.mult[o2].end()) continue;
            long long inner = 0;
            for (const auto& [c, m1] : g.mult[o1]) {
                auto it = g.mult[o2].find(c);
                if (it != g.mult[o2].end())
                    inner += (long long)g.clusters[c].size * m1 * it->second;
            }
            s += (long long)i1->second * i2->second * inner;
        }
    }
    return s;
}

// Ball of the (possibly infinite) quotient group around the identity, for
// rendering infinite-depth principal graphs.  Elements are (h, k, n) with the
// n-part a standardized phase array.
inline BipartiteGraph truncated_graph(const WordContext& ctx, int radius) {
    CommGroupData d = commutator_group(ctx);
    const FinGroup &H = ctx.H, &K = ctx.K;
    struct El {
        int h, k;
        PhaseArray n;
    };
    auto key = [&](const El& e) {
        return std::to_string(e.h) + "|" + std::to_string(e.k) + "|" + e.n.key();
    };
    auto shift_std = [&](int h, int k, const PhaseArray& a) {
        return ctx.shift_apply(h, k, a).standardized();
    };
    auto carr = [&](int k, int h) {
        return ctx.evaluate({{'k', K.inv[k]}, {'h', H.inv[h]}, {'k', k}, {'h', h}})
            .arr.standardized();
    };
    auto mul = [&](const El& a, const El& b) {
        PhaseArray n = shift_std(H.id, K.inv[b.k], carr(a.k, b.h)) *
                       shift_std(H.id, K.inv[b.k], shift_std(H.inv[b.h], K.id, a.n)) *
                       b.n;
        return El{H.mul(a.h, b.h), K.mul(a.k, b.k), n.standardized()};
    };

    // word-length ball of N over the commutator generators
    std::vector<PhaseArray> gens;
    for (const auto& a : d.gen_arrays) {
        PhaseArray s = a.standardized();
        if (!s.is_ones()) { gens.push_back(s); gens.push_back(s.conj().standardized()); }
    }
    std::vector<std::pair<PhaseArray, int>> ball;   // array, distance
    std::map<std::string, int> ball_index;
    ball.push_back({PhaseArray::ones(H.order, K.order), 0});
    ball_index[ball[0].first.key()] = 0;
    size_t head = 0;
    while (head < ball.size()) {
        auto [a, dist] = ball[head++];
        if (dist == radius) continue;
        for (const auto& g : gens) {
            PhaseArray nx = (a * g).standardized();
            if (!ball_index.count(nx.key())) {
                ball_index[nx.key()] = (int)ball.size();
                ball.push_back({nx, dist + 1});
            }
        }
    }

    BipartiteGraph bg;
    bg.truncated = true;
    bg.odd_labels.resize(ball.size());
    bg.odd_boundary.assign(ball.size(), 0);
    bg.mult.resize(ball.size());
    std::map<std::string, int> coset_ids;   // canonical member key -> cluster
    for (size_t i = 0; i < ball.size(); ++i) {
        bg.odd_labels[i] = "N" + std::to_string(i);
        bg.odd_boundary[i] = ball[i].second == radius && radius > 0;
        for (int k = 0; k < K.order; ++k) {
            El g{H.id, K.id, ball[i].first};
            g = mul(g, El{H.id, k, PhaseArray::ones(H.order, K.order)});
            // double coset HgH and its single-coset count
            std::map<std::string, El> members;
            std::set<std::string> rights;
            for (int a = 0; a < H.order; ++a)
                for (int b = 0; b < H.order; ++b) {
                    El m = mul(mul(El{a, K.id, PhaseArray::ones(H.order, K.order)}, g),
                               El{b, K.id, PhaseArray::ones(H.order, K.order)});
                    members.emplace(key(m), m);
                }
            // right cosets mA keyed by their minimal member
            std::map<std::string, std::set<std::string>> singles;
            for (const auto& [mk, m] : members) {
                std::set<std::string> cos;
                for (int b = 0; b < H.order; ++b)
                    cos.insert(key(mul(m, El{b, K.id, PhaseArray::ones(H.order, K.order)})));
                singles[*cos.begin()] = cos;
            }
            int p = (int)singles.size();
            if (H.order % p != 0) throw std::runtime_error("NonIntegerCluster");
            std::string canon = members.begin()->first;
            auto it = coset_ids.find(canon);
            int cid;
            if (it == coset_ids.end()) {
                cid = (int)bg.clusters.size();
                coset_ids[canon] = cid;
                bg.clusters.push_back({"D" + std::to_string(cid), H.order / p, p});
                if (members.count(key(El{H.id, K.id, PhaseArray::ones(H.order, K.order)})))
                    bg.dist_cluster = cid;
            } else {
                cid = it->second;
            }
            bg.mult[i][cid] += 1;
        }
    }
    bg.dist_odd = 0;
    return bg;
}

// Deterministic DOT rendering: odd vertices filled, even open, multiplicity
// as parallel edges, the starred vertex carries a * in its label, boundary
// vertices of truncated graphs are dashed.
inline std::string emit_dot(const BipartiteGraph& g) {
    std::string out = "digraph principal {\n";
    out += "  node [shape=circle fontsize=10];\n";
    for (int o = 0; o < g.odd_count(); ++o) {
        out += "  \"o" + std::to_string(o) + "\" [label=\"" + g.odd_labels[o] +
               "\" style=\"filled" + (g.odd_boundary[o] ? ",dashed" : "") + "\"];\n";
    }
    for (size_t c = 0; c < g.clusters.size(); ++c)
        for (int i = 0; i < g.clusters[c].size; ++i) {
            bool starred = (int)c == g.dist_cluster && i == 0;
            out += "  \"e" + std::to_string(c) + "_" + std::to_string(i) + "\" [label=\"" +
                   g.clusters[c].label + ":" + std::to_string(i) +
                   (starred ? "*" : "") + " d" + std::to_string(g.clusters[c].dim) +
                   "\"];\n";
        }
    for (int o = 0; o < g.odd_count(); ++o)
        for (const auto& [c, m] : g.mult[o])
            for (int i = 0; i < g.clusters[c].size; ++i)
                for (int rep = 0; rep < m; ++rep)
                    out += "  \"o" + std::to_string(o) + "\" -> \"e" + std::to_string(c) +
                           "_" + std::to_string(i) + "\" [dir=none];\n";
    out += "}\n";
    return out;
}

// Label-independent comparison key: iterated colour refinement over the
// bipartite incidence with dimensions as initial colours.
inline std::string canonical_hash(const BipartiteGraph& g) {
    int no = g.odd_count(), nc = (int)g.clusters.size();
    std::vector<std::string> oc(no), cc(nc);
    for (int o = 0; o < no; ++o)
        oc[o] = std::string("O") + (o == g.dist_odd ? "*" : "") +
                (g.odd_boundary[o] ? "b" : "");
    for (int c = 0; c < nc; ++c)
        cc[c] = "E" + std::to_string(g.clusters[c].size) + "d" +
                std::to_string(g.clusters[c].dim) + (c == g.dist_cluster ? "*" : "");
    for (int round = 0; round < no + nc; ++round) {
        std::vector<std::string> no_c(no), nc_c(nc);
        for (int o = 0; o < no; ++o) {
            std::vector<std::string> sig;
            for (const auto& [c, m] : g.mult[o])
                sig.push_back(std::to_string(m) + "x" + cc[c]);
            std::sort(sig.begin(), sig.end());
            no_c[o] = oc[o] + "(";
            for (auto& s : sig) no_c[o] += s + ";";
            no_c[o] += ")";
        }
        for (int c = 0; c < nc; ++c) {
            std::vector<std::string> sig;
            for (int o = 0; o < no; ++o) {
                auto it = g.mult[o].find(c);
                if (it != g.mult[o].end()) sig.push_back(std::to_string(it->second) + "x" + oc[o]);
            }
            std::sort(sig.begin(), sig.end());
            nc_c[c] = cc[c] + "(";
            for (auto& s : sig) nc_c[c] += s + ";";
            nc_c[c] += ")";
        }
        // compress colours to stable small ids
        std::map<std::string, int> ids;
        for (auto& s : no_c) ids.emplace(s, 0);
        for (auto& s : nc_c) ids.emplace(s, 0);
        int next = 0;
        for (auto& [k, v] : ids) v = next++;
        std::vector<std::string> po(no), pc(nc);
        for (int o = 0; o < no; ++o) po[o] = "c" + std::to_string(ids[no_c[o]]);
        for (int c = 0; c < nc; ++c) pc[c] = "c" + std::to_string(ids[nc_c[c]]);
        if (po == oc && pc == cc) break;
        oc = po;
        cc = pc;
    }
    // final invariant: sorted colour multiset with cluster sizes
    std::vector<std::string> all;
    for (int o = 0; o < no; ++o) all.push_back("o:" + oc[o]);
    for (int c = 0; c < nc; ++c)
        all.push_back("e:" + cc[c] + "s" + std::to_string(g.clusters[c].size) + "d" +
                      std::to_string(g.clusters[c].dim));
    std::sort(all.begin(), all.end());
    std::string h;
    for (auto& s : all) h += s + "\n";
    return h;
}

enum class Verdict { Isomorphic, Distinct, Undetermined };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Isomorphic: return "Isomorphic";
        case Verdict::Distinct: return "Distinct";
        default: return "Undetermined";
    }
}

namespace detail {

// every commutator of nontrivial elements is outer
inline bool commutators_all_outer(const WordContext& ctx) {
    for (int h = 0; h < ctx.H.order; ++h)
        for (int k = 0; k < ctx.K.order; ++k) {
            if (h == ctx.H.id || k == ctx.K.id) continue;
            if (classify_automorphism(ctx, ctx.commutator(h, k)).kind != AutoClass::Outer)
                return false;
        }
    return true;
}

inline bool prime_order(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace detail

// One-directional rules only: a verdict of Undetermined never rules anything
// out, and invariant inequality alone is never promoted to Distinct.
inline Verdict subfactor_verdict(const WordContext& c1, const WordContext& c2) {
    ExtendedGroup e1 = build_extended(c1), e2 = build_extended(c2);
    if (!e1.comm.finite || !e2.comm.finite)
        throw std::invalid_argument("verdict requires finite quotient groups");
    if (canonical_hash(principal_graph(e1.g)) != canonical_hash(principal_graph(e2.g)))
        return Verdict::Distinct;
    if (!(identify_group(e1.g) == identify_group(e2.g)) ||
        !(identify_group(e1.gt) == identify_group(e2.gt)))
        return Verdict::Distinct;
    bool side = (detail::prime_order(c1.H.order) || detail::prime_order(c1.K.order)) ||
                (detail::commutators_all_outer(c1) && detail::commutators_all_outer(c2));
    if (side && invariants_equivalent(c1, c2)) return Verdict::Isomorphic;
    return Verdict::Undetermined;
}

} // namespace ttsub
