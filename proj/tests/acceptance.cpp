#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ttsub/numerics.hpp"
#include "ttsub/report.hpp"

using namespace ttsub;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void outcome(int n, bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what << std::endl;
    if (!ok) ++failures;
}

void skipped(int n, const std::string& what) {
    std::cout << "SKIP criterion " << n << ": " << what << std::endl;
}

template <typename F>
void criterion(int n, const std::string& what, F body) {
    try {
        outcome(n, body(), what);
    } catch (const std::exception& e) {
        outcome(n, false, what + " (exception: " + e.what() + ")");
    }
}

WordContext index4_ctx(Rat delta) {
    auto z2 = parse_group("Z2");
    PhaseArray T = PhaseArray::ones(2, 2);
    T.at(1, 1) = Phase(delta);
    return WordContext(z2, z2, T);
}

WordContext ctx_16_7() {
    auto g = parse_group("Z2xZ2");
    PhaseArray T = PhaseArray::ones(4, 4);
    T.at(3, 3) = Phase(Rat(1, 2));
    return WordContext(g, g, T);
}

// H=Z2, K=Z3, T=(1,1,1,1,chi,xi)
WordContext fourier6_ctx(Phase chi, Phase xi) {
    PhaseArray T = PhaseArray::ones(2, 3);
    T.at(1, 1) = chi;
    T.at(1, 2) = xi;
    return WordContext(parse_group("Z2"), parse_group("Z3"), T);
}

WordContext fifteenth(long long a) { return fourier6_ctx(Phase::one(), Phase(Rat(a, 15))); }

WordContext z3z3_ctx(long long a) {
    PhaseArray T = PhaseArray::ones(3, 3);
    T.at(2, 2) = Phase(Rat(a, 3));
    return WordContext(parse_group("Z3"), parse_group("Z3"), T);
}

WordContext s3_ctx() {
    PhaseArray T = PhaseArray::ones(2, 6);
    T.at(1, 5) = Phase(Rat(1, 4));
    return WordContext(parse_group("Z2"), FinGroup::symmetric(3), T);
}

bool crit1_index4_family() {
    for (long long b = 1; b <= 24; ++b)
        for (long long a = 0; a < b; ++a) {
            if (std::gcd(a == 0 ? b : a, b) != 1) continue;
            Phase delta(Rat(a, b));
            long long l = *delta.pow(4).order();
            auto e = build_extended(index4_ctx(Rat(a, b)));
            AbelianStructure expect_n = l == 1 ? AbelianStructure{} : AbelianStructure{{l}, 0};
            if (!(e.comm.n_structure == expect_n)) return false;
            auto desc = identify_group(e.g);
            if (l == 1) {
                if (!(desc == GroupDescriptor{GroupDescriptor::Abelian, 4,
                                              AbelianStructure{{2, 2}, 0}, 0}))
                    return false;
            } else {
                if (desc.kind != GroupDescriptor::Dihedral || desc.order != 4 * l ||
                    desc.dihedral_half != 2 * l)
                    return false;
            }
            bool minus = delta.pow(2 * l) == Phase(Rat(1, 2));
            if (cyclic_cocycle_test(e).found != minus) return false;
        }
    // irrational rotation: infinite N of rank 1, D_inf annotation
    PhaseArray T = PhaseArray::ones(2, 2);
    T.at(1, 1) = Phase::symbol(1);
    auto d = commutator_group(WordContext(parse_group("Z2"), parse_group("Z2"), T));
    if (d.finite || d.n_structure.free_rank != 1) return false;
    json c = cmd_classify4("1/2*t1");
    return c["group"] == "D_inf" && c["depth"] == "infinite";
}

bool crit2_hadamard_16_7() {
    auto ctx = ctx_16_7();
    auto e = build_extended(ctx);
    if (!(e.comm.n_structure == AbelianStructure{{2, 2, 2, 2}, 0})) return false;
    // the five relations among commutator classes, H = {1,w,x,wx}, K = {1,y,z,yz}
    const auto& d = e.comm;
    auto c = [&](int h, int k) { return d.comm_map[k][h]; };
    auto mulN = [&](int i, int j) {
        return d.n_index.at((d.n_elements[i] * d.n_elements[j]).standardized().key());
    };
    if (mulN(c(1, 1), c(1, 2)) != c(1, 3)) return false;
    if (mulN(c(2, 1), c(2, 2)) != c(2, 3)) return false;
    if (mulN(c(1, 1), c(2, 1)) != c(3, 1)) return false;
    if (mulN(c(1, 2), c(2, 2)) != c(3, 2)) return false;
    if (mulN(mulN(mulN(c(1, 1), c(1, 2)), c(2, 1)), c(2, 2)) != c(3, 3)) return false;
    if (e.g.order != 256 || e.g.is_abelian()) return false;
    auto g = principal_graph(e.g);
    if (g.odd_count() != 16 || g.even_count() != 76) return false;
    // each coset cluster Hn is adjacent to exactly one odd vertex, HnK
    for (int cl = 0; cl < (int)g.clusters.size(); ++cl) {
        if (g.clusters[cl].size != 4) continue;
        int inc = 0;
        for (int o = 0; o < g.odd_count(); ++o) inc += (int)g.mult[o].count(cl);
        if (inc != 1) return false;
    }
    for (int o = 0; o < g.odd_count(); ++o)
        if (g.degree_sum(o) != 16) return false;
    return predicted_commutant_dims(g, 1) == 7;
}

bool crit3_fourier6() {
    PhaseArray Tm = PhaseArray::ones(3, 2);
    Tm.at(2, 1) = Phase(Rat(1, 2));
    auto em = build_extended(WordContext(parse_group("Z3"), parse_group("Z2"), Tm));
    if (!(identify_group(em.g) ==
          GroupDescriptor{GroupDescriptor::Abelian, 6, AbelianStructure{{6}, 0}, 0}))
        return false;
    if (em.s_nt.size() <= 1) return false;
    auto ew = build_extended(fourier6_ctx(Phase::one(), Phase(Rat(1, 3))));
    if (ew.g.order != 18 || ew.g.is_abelian()) return false;
    if (!(ew.comm.n_structure == AbelianStructure{{3}, 0})) return false;
    auto ei = build_extended(fourier6_ctx(Phase::one(), Phase(Rat(1, 4))));
    if (ei.g.order != 24) return false;
    if (!(ei.comm.n_structure == AbelianStructure{{2, 2}, 0})) return false;
    auto ef = build_extended(fifteenth(1));
    if (!(ef.comm.n_structure == AbelianStructure{{5, 15}, 0})) return false;
    if (ef.g.order != 450 || ef.gt.order != 1350) return false;
    if (!(ef.s_structure == AbelianStructure{{3}, 0})) return false;
    for (long long a : {4, 7, 13})
        if (!invariants_equivalent(fifteenth(1), fifteenth(a))) return false;
    for (long long a : {2, 8, 11, 14})
        if (invariants_equivalent(fifteenth(1), fifteenth(a))) return false;
    for (long long a : {8, 11, 14})
        if (!invariants_equivalent(fifteenth(2), fifteenth(a))) return false;
    return true;
}

bool crit4_z3z3() {
    auto e = build_extended(z3z3_ctx(1));
    if (!(e.comm.n_structure == AbelianStructure{{3}, 0})) return false;
    if (!(e.s_structure == AbelianStructure{{3}, 0})) return false;
    std::vector<Phase> target = {Phase::one(), Phase(Rat(1, 3)), Phase(Rat(2, 3))};
    bool u_found = false;
    for (int nt : e.s_nt)
        if (e.u_of(nt) == target) u_found = true;
    if (!u_found) return false;
    auto w = cyclic_cocycle_test(e);
    if (!w.found || e.gt.element_order(w.g) != 9) return false;
    if (w.lambda.is_one() || !w.lambda.pow(3).is_one()) return false;
    // hk lies in the cyclic subgroup generated by the witness element
    int hk = e.gt.encode(1, 1, 0), x = w.g;
    bool contains = false;
    for (int i = 0; i < 9; ++i, x = e.gt.mul(x, w.g))
        if (x == hk) contains = true;
    if (!contains) return false;
    if (!invariants_equivalent(z3z3_ctx(1), z3z3_ctx(2))) return false;
    if (e.g.order != 27 || e.gt.order != 81) return false;
    AnalysisSpec s;
    s.H = s.K = "Z3";
    s.twist.assign(9, "0");
    s.twist[8] = "1/3";
    json r = cmd_analyze(s);
    for (const auto& warning : r["warnings"])
        if (warning.get<std::string>().find("81") != std::string::npos) return true;
    return false;
}

bool crit5_s3() {
    auto ctx = s3_ctx();
    auto d = commutator_group(ctx);
    if (!(d.n_structure == AbelianStructure{{2, 2, 2, 2}, 0})) return false;
    // the product of all five commutator generators is inner
    PhaseArray prod = PhaseArray::ones(2, 6);
    for (const auto& a : d.gen_arrays) prod = prod * a;
    if (!prod.standardized().is_ones() || !prod.is_product_form()) return false;
    auto q = build_G(ctx);
    if (q.order != 192) return false;
    auto g = principal_graph(q);
    if (g.odd_count() != 16 || g.even_count() != 72) return false;
    int size2 = 0, size1 = 0;
    for (const auto& c : g.clusters) {
        if (c.size == 2 && c.dim == 1) size2 += 2;
        else if (c.size == 1 && c.dim == 2) size1 += 1;
        else return false;
    }
    if (size2 != 32 || size1 != 40) return false;
    for (int o = 0; o < g.odd_count(); ++o)
        if (g.neighbor_count(o) != 7 || g.degree_sum(o) != 12) return false;
    return true;
}

bool crit6_infinite_depth() {
    int next_symbol = 1;
    auto rank_of = [&](const std::string& h, const std::string& k) {
        FinGroup H = parse_group(h), K = parse_group(k);
        PhaseArray T = PhaseArray::ones(H.order, K.order);
        for (int i = 1; i < H.order; ++i)
            for (int j = 1; j < K.order; ++j) T.at(i, j) = Phase::symbol(next_symbol++);
        auto d = commutator_group(WordContext(H, K, T));
        return d.finite ? -1 : d.n_structure.free_rank;
    };
    if (rank_of("Z2", "Z2") != 1) return false;
    if (rank_of("Z2", "Z3") != 2) return false;
    if (rank_of("Z3", "Z3") != 4) return false;
    AnalysisSpec s;
    s.H = "Z2";
    s.K = "Z3";
    s.twist = {"0", "0", "0", "0", "1/2*t1", "1/3*t2"};
    json r = cmd_analyze(s);
    return r["annotation"] == "G_{2,3,6}" && r["N"]["free_rank"] == 2;
}

bool crit7_numerics_cross_validation() {
    for (int n = 2; n <= 6; ++n) {
        auto F = fourier_matrix(parse_group("Z" + std::to_string(n)));
        if (relative_commutant_dims(F, 1) != n) return false;
        if (!commutant_is_abelian(F)) return false;
    }
    for (Rat delta : {Rat(1, 8), Rat(1, 3)}) {
        auto ctx = index4_ctx(delta);
        auto Hm = twisted_tensor_standard(ctx.H, ctx.K, ctx.twist);
        auto g = principal_graph(build_G(ctx));
        if (predicted_commutant_dims(g, 1) != 3) return false;
        if (relative_commutant_dims(Hm, 1) != 3) return false;
        if (!commutant_is_abelian(Hm)) return false;
    }
    auto ctx = ctx_16_7();
    auto Hm = twisted_tensor_standard(ctx.H, ctx.K, ctx.twist);
    auto g = principal_graph(build_G(ctx));
    if (predicted_commutant_dims(g, 1) != 7) return false;
    if (relative_commutant_dims(Hm, 1) != 7) return false;
    return commutant_is_abelian(Hm);
}

void crit8_catalog(const std::string& data_dir) {
    std::vector<fs::path> files;
    if (fs::is_directory(data_dir))
        for (const auto& entry : fs::directory_iterator(data_dir))
            if (entry.path().extension() == ".txt") files.push_back(entry.path());
    if (files.empty()) {
        skipped(8, "real 16x16 catalog (no data files present)");
        return;
    }
    criterion(8, "real 16x16 catalog level-1 dims {16,7,4,3,3}", [&]() {
        std::sort(files.begin(), files.end());
        std::multiset<int> dims;
        for (const auto& f : files) {
            std::ifstream in(f);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            auto Hm = parse_real_hadamard(text);
            if (Hm.n != 16) return false;
            dims.insert(relative_commutant_dims(Hm, 1));
        }
        return dims == std::multiset<int>{3, 3, 4, 7, 16};
    });
}

bool crit9_property_suites() {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<long long> num(0, 11);
    std::vector<std::string> names = {"Z2", "Z3", "Z4", "Z2xZ2"};
    auto random_ctx = [&]() {
        FinGroup H = parse_group(names[rng() % names.size()]);
        FinGroup K = parse_group(names[rng() % names.size()]);
        PhaseArray T(H.order, K.order);
        for (auto& p : T.a) p = Phase(Rat(num(rng), 12));
        return WordContext(H, K, T);
    };
    // twisted tensors are always Hadamard
    for (int t = 0; t < 200; ++t) {
        auto ctx = random_ctx();
        if (!is_hadamard(twisted_tensor_standard(ctx.H, ctx.K, ctx.twist))) return false;
    }
    // word evaluation is a homomorphism
    for (int t = 0; t < 500; ++t) {
        auto ctx = random_ctx();
        auto random_word = [&]() {
            Word w;
            int len = 1 + (int)(rng() % 5);
            for (int i = 0; i < len; ++i)
                w.push_back(rng() % 2 ? Letter{'h', (int)(rng() % ctx.H.order)}
                                      : Letter{'k', (int)(rng() % ctx.K.order)});
            return w;
        };
        Word w1 = random_word(), w2 = random_word(), cat = w1;
        cat.insert(cat.end(), w2.begin(), w2.end());
        if (!(ctx.compose(ctx.evaluate(w1), ctx.evaluate(w2)) == ctx.evaluate(cat)))
            return false;
    }
    // degree sum rule on random finite twists
    int tested = 0;
    for (int t = 0; t < 400 && tested < 50; ++t) {
        auto ctx = random_ctx();
        CommGroupData d;
        try {
            d = commutator_group(ctx, 20000);
        } catch (const std::runtime_error&) {
            continue;   // enumeration cap: the twist generates too large a group
        }
        long long ghk = (long long)ctx.H.order * ctx.K.order;
        if (!d.finite || (long long)d.n_elements.size() * ghk > 2000) continue;
        auto g = principal_graph(assemble_group(ctx, d, false));
        for (int o = 0; o < g.odd_count(); ++o)
            if (g.degree_sum(o) != ghk) return false;
        ++tested;
    }
    if (tested < 50) return false;
    // Smith normal form on random integer matrices
    std::uniform_int_distribution<long long> entry(-9, 9);
    for (int t = 0; t < 200; ++t) {
        int nr = 1 + (int)(rng() % 6), nc = 1 + (int)(rng() % 6);
        IMat m(nr, std::vector<long long>(nc));
        for (auto& row : m)
            for (auto& x : row) x = entry(rng);
        auto r = smith_normal_form(m);
        if (!(imat_mul(imat_mul(r.u, m), r.v) == r.s)) return false;
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j)
                if (i != j && r.s[i][j] != 0) return false;
        for (int i = 0; i + 1 < (int)r.diag.size(); ++i)
            if (r.diag[i + 1] % r.diag[i] != 0) return false;
    }
    // byte determinism of reports and DOT output
    AnalysisSpec s = spec_from_preset("paper-16-7");
    if (cmd_analyze(s).dump(2) != cmd_analyze(s).dump(2)) return false;
    auto q = build_G(ctx_16_7());
    return emit_dot(principal_graph(q)) == emit_dot(principal_graph(q));
}

bool crit10_equivalence_spot_checks() {
    auto ctx_i = index4_ctx(Rat(1, 4));
    auto Hi = twisted_tensor_standard(ctx_i.H, ctx_i.K, ctx_i.twist);
    if (!hadamard_equivalent(Hi, fourier_matrix(parse_group("Z4")))) return false;
    if (hadamard_equivalent(Hi, fourier_matrix(parse_group("Z2xZ2")))) return false;
    return subfactor_verdict(index4_ctx(Rat(0)), ctx_i) == Verdict::Distinct;
}

} // namespace

int main(int argc, char** argv) {
    std::string data_dir = argc > 1 ? argv[1] : "data";
    criterion(1, "index-4 family sweep b <= 24", crit1_index4_family);
    criterion(2, "Hadamard 16-7 group, relations, and graph", crit2_hadamard_16_7);
    criterion(3, "Fourier-6 twists and fifteenth-root partition", crit3_fourier6);
    criterion(4, "Z3*Z3 cube-root twist and discrepancy flag", crit4_z3z3);
    criterion(5, "Z2,S3 example", crit5_s3);
    criterion(6, "infinite-depth detection and free ranks", crit6_infinite_depth);
    criterion(7, "numerics cross-validation against graph loop counts",
              crit7_numerics_cross_validation);
    crit8_catalog(data_dir);
    criterion(9, "property suites", crit9_property_suites);
    criterion(10, "equivalence spot checks", crit10_equivalence_spot_checks);
    return failures == 0 ? 0 : 1;
}
