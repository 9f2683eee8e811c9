#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttsub/graph.hpp"
#include "ttsub/numerics.hpp"

namespace ttsub {

using json = nlohmann::json;   // sorts keys: deterministic serialization

struct AnalysisSpec {
    std::string H = "Z2", K = "Z2";
    std::vector<std::string> twist;        // phase literals, row-major over H x K
    std::optional<bool> right_h;
    int radius = 2;
    int level = -1;                        // numerics level, -1 = skip
    int aut_bound = 16;
};

inline AnalysisSpec spec_from_preset(const std::string& name) {
    AnalysisSpec s;
    auto val = [&](const std::string& key) {
        auto pos = name.find(key + "=");
        if (pos == std::string::npos)
            throw std::invalid_argument("preset '" + name + "' is missing " + key);
        auto end = name.find(',', pos);
        return name.substr(pos + key.size() + 1,
                           end == std::string::npos ? std::string::npos : end - pos - key.size() - 1);
    };
    if (name == "paper-16-7") {
        s.H = s.K = "Z2xZ2";
        s.twist.assign(16, "0");
        s.twist[15] = "1/2";
        return s;
    }
    if (name.rfind("index4:", 0) == 0) {
        s.H = s.K = "Z2";
        s.twist = {"0", "0", "0", val("delta")};
        return s;
    }
    if (name.rfind("fourier6:", 0) == 0) {
        s.H = "Z2";
        s.K = "Z3";
        s.twist = {"0", "0", "0", "0", val("chi"), val("xi")};
        return s;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

inline AnalysisSpec spec_from_json(const json& j) {
    if (j.contains("preset")) {
        AnalysisSpec s = spec_from_preset(j["preset"].get<std::string>());
        if (j.contains("level")) s.level = j["level"].get<int>();
        if (j.contains("radius")) s.radius = j["radius"].get<int>();
        return s;
    }
    AnalysisSpec s;
    s.H = j.at("H").get<std::string>();
    s.K = j.at("K").get<std::string>();
    s.twist = j.at("twist").get<std::vector<std::string>>();
    if (j.contains("right_h")) s.right_h = j["right_h"].get<bool>();
    if (j.contains("radius")) s.radius = j["radius"].get<int>();
    if (j.contains("level")) s.level = j["level"].get<int>();
    if (j.contains("aut_bound")) s.aut_bound = j["aut_bound"].get<int>();
    return s;
}

inline json spec_to_json(const AnalysisSpec& s) {
    json j;
    j["H"] = s.H;
    j["K"] = s.K;
    j["twist"] = s.twist;
    if (s.right_h) j["right_h"] = *s.right_h;
    j["radius"] = s.radius;
    j["level"] = s.level;
    j["aut_bound"] = s.aut_bound;
    return j;
}

inline WordContext spec_context(const AnalysisSpec& s) {
    FinGroup H = parse_group(s.H);
    FinGroup K = parse_group(s.K);
    if ((int)s.twist.size() != H.order * K.order)
        throw std::invalid_argument("twist length must be |H| * |K|");
    PhaseArray T(H.order, K.order);
    for (int i = 0; i < H.order; ++i)
        for (int j = 0; j < K.order; ++j)
            T.at(i, j) = parse_phase(s.twist[(size_t)i * K.order + j]);
    return WordContext(std::move(H), std::move(K), std::move(T), s.right_h);
}

inline json structure_json(const AbelianStructure& a) {
    json j;
    j["name"] = a.str();
    j["torsion"] = a.torsion;
    j["free_rank"] = a.free_rank;
    return j;
}

inline json graph_json(const BipartiteGraph& g) {
    json j;
    j["odd_vertices"] = g.odd_count();
    j["even_vertices"] = g.even_count();
    j["clusters"] = g.clusters.size();
    j["connected"] = g.connected;
    j["predicted_dims"] = {predicted_commutant_dims(g, 0), predicted_commutant_dims(g, 1)};
    std::vector<long long> degs;
    for (int o = 0; o < g.odd_count(); ++o) degs.push_back(g.degree_sum(o));
    j["degree_sums"] = degs;
    return j;
}

// Paper-discrepancy flags are attached when the analyzed example is one the
// published text miscounts.
inline std::vector<std::string> discrepancy_warnings(const WordContext& ctx,
                                                     const CommGroupData& d) {
    std::vector<std::string> w;
    if (ctx.H.order == 3 && ctx.K.order == 3 && d.finite && d.n_elements.size() == 3 &&
        d.s_elements.size() == 3)
        w.push_back("published orders |G|=81, |Gtilde|=243 disagree with the counting rule "
                    "|G|=|H||K||N|; computed 27 and 81 are reported");
    if (!d.finite && ctx.H.order == 2 && ctx.K.order == 3 && d.n_structure.free_rank == 2)
        w.push_back("published N=Z_2^2 for the doubly irrational Z2,Z3 twist; the computed "
                    "group is free abelian of rank 2");
    return w;
}

inline json cmd_analyze(const AnalysisSpec& spec, const std::string& dot_dir = "") {
    WordContext ctx = spec_context(spec);
    json r;
    r["spec"] = spec_to_json(spec);
    auto Hm = twisted_tensor_standard(ctx.H, ctx.K, ctx.twist);
    r["matrix"]["size"] = Hm.n;
    r["matrix"]["is_hadamard"] = is_hadamard(Hm);

    CommGroupData d = commutator_group(ctx);
    r["N"] = structure_json(d.n_structure);
    r["Ntilde"] = structure_json(d.ntilde_structure);
    r["S"] = structure_json(d.s_structure);
    for (const auto& w : discrepancy_warnings(ctx, d)) r["warnings"].push_back(w);
    if (!r.contains("warnings")) r["warnings"] = json::array();

    if (!d.finite) {
        r["finite"] = false;
        if (ctx.H.order == 2 && ctx.K.order == 3 && d.n_structure.free_rank == 2)
            r["annotation"] = "G_{2,3,6}";
        else
            r["annotation"] = "infinite depth";
        BipartiteGraph tg = truncated_graph(ctx, spec.radius);
        r["truncated_graph"] = graph_json(tg);
        r["truncated_graph"]["radius"] = spec.radius;
        if (!dot_dir.empty()) {
            std::ofstream(dot_dir + "/truncated.dot") << emit_dot(tg);
            r["graph_files"] = {dot_dir + "/truncated.dot"};
        }
        return r;
    }
    r["finite"] = true;
    ExtendedGroup e = build_extended(ctx);
    r["order_G"] = e.g.order;
    r["order_Gtilde"] = e.gt.order;
    r["order_S"] = (long long)e.s_nt.size();
    r["group"] = identify_group(e.g).str();
    r["group_tilde"] = identify_group(e.gt).str();

    CharInvariant ci = char_invariant(e);
    json lam = json::array();
    for (size_t i = 0; i < ci.gens.size() && !ci.table.empty(); ++i) {
        json row;
        row["generator"] = std::string(1, ci.gens[i].first) + std::to_string(ci.gens[i].second);
        std::vector<std::string> vals;
        for (const auto& p : ci.table[i]) vals.push_back(p.str());
        row["lambda"] = vals;
        lam.push_back(row);
    }
    r["lambda_table"] = lam;
    json us = json::array();
    for (int s : ci.s_indices) {
        std::vector<std::string> u;
        for (const auto& p : e.u_of(s)) u.push_back(p.str());
        us.push_back(u);
    }
    r["u_coordinates"] = us;

    CocycleWitness w = cyclic_cocycle_test(e);
    if (w.found) {
        r["cocycle"]["witness"] = true;
        r["cocycle"]["lambda"] = w.lambda.str();
        r["cocycle"]["element_order"] = e.gt.element_order(w.g);
    } else {
        r["cocycle"]["witness"] = false;
        r["cocycle"]["status"] = "Inconclusive";
    }

    BipartiteGraph pg = principal_graph(e.g), dg = dual_graph(e.g);
    r["principal_graph"] = graph_json(pg);
    r["dual_graph"] = graph_json(dg);
    if (!dot_dir.empty()) {
        std::ofstream(dot_dir + "/principal.dot") << emit_dot(pg);
        std::ofstream(dot_dir + "/dual.dot") << emit_dot(dg);
        r["graph_files"] = {dot_dir + "/principal.dot", dot_dir + "/dual.dot"};
    }

    if (spec.level >= 0) {
        int dim = relative_commutant_dims(Hm, spec.level);
        r["numerics"]["level"] = spec.level;
        r["numerics"]["dimension"] = dim;
        if (spec.level <= 1) {
            long long predicted = predicted_commutant_dims(pg, spec.level);
            r["numerics"]["graph_predicted"] = predicted;
            r["numerics"]["match"] = (long long)dim == predicted;
        }
        if (spec.level == 1) r["numerics"]["abelian"] = commutant_is_abelian(Hm);
    }
    return r;
}

inline json cmd_classify4(const std::string& delta_literal) {
    Phase delta = parse_phase(delta_literal);
    json r;
    r["delta"] = delta.str();
    if (!delta.is_rational()) {
        r["l"] = "infinite";
        r["N"] = "Z";
        r["group"] = "D_inf";
        r["graph"] = "D_inf";
        r["depth"] = "infinite";
        r["cocycle"] = "none (infinite order)";
        return r;
    }
    long long l = *delta.pow(4).order();
    r["l"] = l;
    r["N"] = "Z" + std::to_string(l);
    r["group"] = l == 1 ? std::string("Z2 x Z2 (order 4)")
                        : "Dihedral(" + std::to_string(2 * l) + ") (order " +
                              std::to_string(4 * l) + ")";
    r["graph"] = "D^(1)_" + std::to_string(2 * l + 1);
    bool minus = delta.pow(2 * l) == Phase(Rat(1, 2));
    r["cocycle"] = minus ? "nontrivial (delta^2l = -1)" : "trivial (delta^2l = 1)";
    if (l == 1) r["identification"] = minus ? "R < R x Z4" : "R < R x (Z2 x Z2)";
    return r;
}

inline json cmd_compare(const AnalysisSpec& a, const AnalysisSpec& b) {
    WordContext ca = spec_context(a), cb = spec_context(b);
    json r;
    r["spec_a"] = spec_to_json(a);
    r["spec_b"] = spec_to_json(b);
    Verdict v = subfactor_verdict(ca, cb);
    r["verdict"] = verdict_name(v);
    ExtendedGroup ea = build_extended(ca), eb = build_extended(cb);
    r["evidence"]["graphs_equal"] =
        canonical_hash(principal_graph(ea.g)) == canonical_hash(principal_graph(eb.g));
    r["evidence"]["group_a"] = identify_group(ea.g).str();
    r["evidence"]["group_b"] = identify_group(eb.g).str();
    r["evidence"]["group_tilde_a"] = identify_group(ea.gt).str();
    r["evidence"]["group_tilde_b"] = identify_group(eb.gt).str();
    r["evidence"]["invariants_equivalent"] = invariants_equivalent(ca, cb, a.aut_bound);
    return r;
}

inline json cmd_equiv(const AnalysisSpec& a, const AnalysisSpec& b) {
    json r;
    r["spec_a"] = spec_to_json(a);
    r["spec_b"] = spec_to_json(b);
    r["equivalent"] = invariants_equivalent(spec_context(a), spec_context(b), a.aut_bound);
    return r;
}

inline json cmd_commutant(const HadamardMatrix& Hm, int level,
                          const std::optional<AnalysisSpec>& spec = std::nullopt) {
    json r;
    r["matrix"]["size"] = Hm.n;
    r["matrix"]["is_hadamard"] = is_hadamard(Hm);
    int dim = relative_commutant_dims(Hm, level);
    r["level"] = level;
    r["dimension"] = dim;
    if (level == 1) r["abelian"] = commutant_is_abelian(Hm);
    if (spec && level <= 1) {
        WordContext ctx = spec_context(*spec);
        CommGroupData d = commutator_group(ctx);
        if (d.finite) {
            auto g = principal_graph(assemble_group(ctx, d, false));
            long long predicted = predicted_commutant_dims(g, level);
            r["graph_predicted"] = predicted;
            r["match"] = (long long)dim == predicted;
        }
    }
    return r;
}

} // namespace ttsub
