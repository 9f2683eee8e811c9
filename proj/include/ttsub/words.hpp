#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ttsub/group.hpp"
#include "ttsub/phase.hpp"

namespace ttsub {

// Restriction of a word of H*K to the coordinate algebra l^inf(H x K): a
// diagonal phase array times an index shift (h,k).
struct TwistedPerm {
    int sh = 0, sk = 0;   // shift pair, element indices in H and K
    PhaseArray arr;

    friend bool operator==(const TwistedPerm& a, const TwistedPerm& b) {
        return a.sh == b.sh && a.sk == b.sk && a.arr == b.arr;
    }
};

// One letter of a word over H ⊔ K.
struct Letter {
    char tag;   // 'h' or 'k'
    int elem;   // element index
};
using Word = std::vector<Letter>;

struct WordContext {
    FinGroup H, K;
    PhaseArray twist;
    bool right_h;   // H acts by the right regular representation on its index

    WordContext(FinGroup h, FinGroup k, PhaseArray t, std::optional<bool> right = std::nullopt)
        : H(std::move(h)), K(std::move(k)), twist(std::move(t)),
          right_h(right ? *right : false) {
        if (twist.rows != H.order || twist.cols != K.order)
            throw std::invalid_argument("twist size mismatch");
        if (!right && (!H.abelian || !K.abelian)) right_h = true;
    }

    // Index shift of an array by the regular representation of (h,k).
    PhaseArray shift_apply(int h, int k, const PhaseArray& a) const {
        std::vector<int> rm(H.order), cm(K.order);
        for (int r = 0; r < H.order; ++r)
            rm[r] = right_h ? H.mul(r, h) : H.mul(H.inv[h], r);
        for (int c = 0; c < K.order; ++c) cm[c] = K.mul(K.inv[k], c);
        return a.remap(rm, cm);
    }

    TwistedPerm identity() const { return {H.id, K.id, PhaseArray::ones(H.order, K.order)}; }

    // b(h) = T sigma_h(T*), shift (h,1)
    TwistedPerm gen_h(int h) const { return {h, K.id, twist * shift_apply(h, K.id, twist.conj())}; }
    // b(k) = plain shift (1,k)
    TwistedPerm gen_k(int k) const { return {H.id, k, PhaseArray::ones(H.order, K.order)}; }

    TwistedPerm compose(const TwistedPerm& a, const TwistedPerm& b) const {
        return {H.mul(a.sh, b.sh), K.mul(a.sk, b.sk), a.arr * shift_apply(a.sh, a.sk, b.arr)};
    }

    TwistedPerm inverse(const TwistedPerm& a) const {
        int ih = H.inv[a.sh], ik = K.inv[a.sk];
        return {ih, ik, shift_apply(ih, ik, a.arr.conj())};
    }

    TwistedPerm evaluate(const Word& w) const {
        // merge adjacent same-group letters in the group first
        std::vector<Letter> merged;
        for (const Letter& l : w) {
            if (!merged.empty() && merged.back().tag == l.tag) {
                const FinGroup& g = l.tag == 'h' ? H : K;
                merged.back().elem = g.mul(merged.back().elem, l.elem);
                if (merged.back().elem == g.id) merged.pop_back();
            } else {
                merged.push_back(l);
            }
        }
        TwistedPerm p = identity();
        for (const Letter& l : merged)
            p = compose(p, l.tag == 'h' ? gen_h(l.elem) : gen_k(l.elem));
        return p;
    }

    // hkh^-1k^-1, also available in the closed form T rho_h(T*) rho_k(T*) rho_hk(T)
    TwistedPerm commutator(int h, int k) const {
        return evaluate({{'h', h}, {'k', k}, {'h', H.inv[h]}, {'k', K.inv[k]}});
    }
    PhaseArray commutator_closed_form(int h, int k) const {
        return twist * shift_apply(h, K.id, twist.conj()) *
               shift_apply(H.id, k, twist.conj()) * shift_apply(h, k, twist);
    }
};

struct Inner {
    std::vector<Phase> u;   // over H, u[identity] = 1
};
struct AutoClass {
    enum Kind { Trivial, InnerKind, Outer } kind;
    std::vector<Phase> u;   // set when Inner
};

inline AutoClass classify_automorphism(const WordContext& ctx, const TwistedPerm& p) {
    if (p.sh != ctx.H.id || p.sk != ctx.K.id) return {AutoClass::Outer, {}};
    if (p.arr.is_column_function()) return {AutoClass::Trivial, {}};
    if (p.arr.is_product_form()) {
        std::vector<Phase> u(ctx.H.order);
        for (int h = 0; h < ctx.H.order; ++h)
            u[h] = p.arr.at(h, 0) * p.arr.at(ctx.H.id, 0).conj();
        return {AutoClass::InnerKind, std::move(u)};
    }
    return {AutoClass::Outer, {}};
}

// Commutator-subgroup data: Ntilde (arrays mod column functions, represented
// column-normalized), the inner part S (row-function arrays), N = Ntilde/S
// (standardized arrays), actions of H and K, and the commutator map.
struct CommGroupData {
    std::vector<std::pair<int, int>> gen_pairs;   // (h,k), both nontrivial
    std::vector<PhaseArray> gen_arrays;           // column-normalized commutators
    bool finite = true;
    AbelianStructure ntilde_structure, n_structure, s_structure;

    // finite case only:
    std::vector<PhaseArray> ntilde;               // column-normalized, ntilde[0] = identity
    std::map<std::string, int> ntilde_index;
    std::vector<int> s_elements;                  // indices into ntilde
    std::vector<PhaseArray> n_elements;           // standardized reps, n_elements[0] = identity
    std::map<std::string, int> n_index;
    std::vector<std::vector<int>> h_action_nt, k_action_nt;   // [g][i] on ntilde
    std::vector<std::vector<int>> h_action_n, k_action_n;     // [g][i] on n_elements
    std::vector<std::vector<int>> comm_map;       // [k][h] -> index in n_elements
};

inline std::vector<std::pair<std::pair<int, int>, PhaseArray>>
commutator_generators(const WordContext& ctx) {
    std::vector<std::pair<std::pair<int, int>, PhaseArray>> out;
    for (int h = 0; h < ctx.H.order; ++h)
        for (int k = 0; k < ctx.K.order; ++k) {
            if (h == ctx.H.id || k == ctx.K.id) continue;
            TwistedPerm p = ctx.commutator(h, k);
            out.push_back({{h, k}, p.arr.column_normalized()});
        }
    return out;
}

inline CommGroupData commutator_group(const WordContext& ctx, size_t cap = 100000) {
    CommGroupData d;
    for (auto& [hk, arr] : commutator_generators(ctx)) {
        d.gen_pairs.push_back(hk);
        d.gen_arrays.push_back(arr);
    }
    // structures from exact coordinates
    std::vector<std::vector<Phase>> nt_coords, n_coords;
    for (const auto& a : d.gen_arrays) {
        nt_coords.push_back(a.a);
        n_coords.push_back(a.standardized().a);
    }
    d.ntilde_structure = subgroup_structure(nt_coords);
    d.n_structure = subgroup_structure(n_coords);
    d.finite = d.ntilde_structure.finite();
    if (!d.finite) return d;

    // enumerate Ntilde by closure
    auto push = [&](const PhaseArray& a) -> bool {
        std::string k = a.key();
        if (d.ntilde_index.count(k)) return false;
        d.ntilde_index[k] = (int)d.ntilde.size();
        d.ntilde.push_back(a);
        return true;
    };
    push(PhaseArray::ones(ctx.H.order, ctx.K.order));
    std::vector<PhaseArray> frontier = {d.ntilde[0]};
    while (!frontier.empty()) {
        std::vector<PhaseArray> next;
        for (const auto& x : frontier)
            for (const auto& g : d.gen_arrays) {
                PhaseArray y = x * g;
                if (push(y)) next.push_back(y);
                if (d.ntilde.size() > cap) throw std::runtime_error("Ntilde enumeration cap exceeded");
            }
        frontier = std::move(next);
    }
    // S and N
    auto npush = [&](const PhaseArray& std_form) -> int {
        std::string k = std_form.key();
        auto it = d.n_index.find(k);
        if (it != d.n_index.end()) return it->second;
        int idx = (int)d.n_elements.size();
        d.n_index[k] = idx;
        d.n_elements.push_back(std_form);
        return idx;
    };
    npush(PhaseArray::ones(ctx.H.order, ctx.K.order));
    for (int i = 0; i < (int)d.ntilde.size(); ++i) {
        if (d.ntilde[i].is_row_function()) d.s_elements.push_back(i);
        npush(d.ntilde[i].standardized());
    }
    d.s_structure = abelian_invariants(
        (int)d.s_elements.size(),
        [&](int a, int b) {
            PhaseArray p = d.ntilde[d.s_elements[a]] * d.ntilde[d.s_elements[b]];
            int idx = d.ntilde_index.at(p.key());
            for (int j = 0; j < (int)d.s_elements.size(); ++j)
                if (d.s_elements[j] == idx) return j;
            throw std::logic_error("S not closed");
        },
        0);
    // actions by conjugation = pure index shift, re-normalized
    auto build_actions = [&](bool on_h) {
        const FinGroup& g = on_h ? ctx.H : ctx.K;
        std::vector<std::vector<int>> act_nt(g.order), act_n(g.order);
        for (int e = 0; e < g.order; ++e) {
            act_nt[e].resize(d.ntilde.size());
            act_n[e].resize(d.n_elements.size());
            for (size_t i = 0; i < d.ntilde.size(); ++i) {
                PhaseArray moved = on_h ? ctx.shift_apply(e, ctx.K.id, d.ntilde[i])
                                        : ctx.shift_apply(ctx.H.id, e, d.ntilde[i]);
                act_nt[e][i] = d.ntilde_index.at(moved.column_normalized().key());
            }
            for (size_t i = 0; i < d.n_elements.size(); ++i) {
                PhaseArray moved = on_h ? ctx.shift_apply(e, ctx.K.id, d.n_elements[i])
                                        : ctx.shift_apply(ctx.H.id, e, d.n_elements[i]);
                act_n[e][i] = d.n_index.at(moved.standardized().key());
            }
        }
        if (on_h) { d.h_action_nt = act_nt; d.h_action_n = act_n; }
        else { d.k_action_nt = act_nt; d.k_action_n = act_n; }
    };
    build_actions(true);
    build_actions(false);
    // commutator map c(k,h) = class of k^-1 h^-1 k h in N
    d.comm_map.assign(ctx.K.order, std::vector<int>(ctx.H.order, 0));
    for (int k = 0; k < ctx.K.order; ++k)
        for (int h = 0; h < ctx.H.order; ++h) {
            TwistedPerm p = ctx.evaluate({{'k', ctx.K.inv[k]}, {'h', ctx.H.inv[h]}, {'k', k}, {'h', h}});
            d.comm_map[k][h] = d.n_index.at(p.arr.standardized().key());
        }
    return d;
}

// "h[2] k[1,1] h[2]^-1 k[1,1]^-1": tag, bracketed coordinates (tuple for
// abelian groups, single element index for table groups), optional ^e.
inline Word parse_word(const std::string& text, const FinGroup& H, const FinGroup& K) {
    Word w;
    size_t pos = 0;
    auto skip_ws = [&]() { while (pos < text.size() && isspace((unsigned char)text[pos])) ++pos; };
    skip_ws();
    while (pos < text.size()) {
        char tag = text[pos];
        if (tag != 'h' && tag != 'k') throw std::invalid_argument("bad word letter: '" + text + "'");
        const FinGroup& g = tag == 'h' ? H : K;
        ++pos;
        if (pos >= text.size() || text[pos] != '[') throw std::invalid_argument("expected '[' in word");
        size_t close = text.find(']', pos);
        if (close == std::string::npos) throw std::invalid_argument("expected ']' in word");
        std::string coords = text.substr(pos + 1, close - pos - 1);
        pos = close + 1;
        std::vector<long long> t;
        std::string tok;
        for (char ch : coords + ",") {
            if (ch == ',') { t.push_back(std::stoll(tok)); tok.clear(); }
            else if (!isspace((unsigned char)ch)) tok.push_back(ch);
        }
        int elem;
        if (g.abelian && t.size() == g.factors.size()) elem = g.index(t);
        else if (t.size() == 1) elem = (int)t[0];
        else throw std::invalid_argument("bad element coordinates in word");
        if (elem < 0 || elem >= g.order) throw std::invalid_argument("element index out of range");
        long long exp = 1;
        if (pos < text.size() && text[pos] == '^') {
            size_t end = pos + 1;
            while (end < text.size() && !isspace((unsigned char)text[end])) ++end;
            exp = std::stoll(text.substr(pos + 1, end - pos - 1));
            pos = end;
        }
        int base = elem;
        if (exp < 0) { base = g.inv[elem]; exp = -exp; }
        for (long long i = 0; i < exp; ++i) w.push_back({tag, base});
        skip_ws();
    }
    return w;
}

} // namespace ttsub
