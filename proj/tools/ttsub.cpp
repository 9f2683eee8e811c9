#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ttsub/report.hpp"

using namespace ttsub;

namespace {

struct SpecOpts {
    std::string preset, spec_file, H, K;
    std::vector<std::string> twist;
    int radius = 2, level = -1;

    void attach(CLI::App* app, const std::string& suffix = "") {
        app->add_option("--preset" + suffix, preset, "named example spec");
        app->add_option("--spec" + suffix, spec_file, "JSON spec file");
        app->add_option("--H" + suffix, H, "left group literal");
        app->add_option("--K" + suffix, K, "right group literal");
        app->add_option("--twist" + suffix, twist, "row-major phase literals")->delimiter(',');
    }

    AnalysisSpec resolve() const {
        AnalysisSpec s;
        if (!preset.empty()) {
            s = spec_from_preset(preset);
        } else if (!spec_file.empty()) {
            std::ifstream in(spec_file);
            if (!in) throw std::invalid_argument("cannot open spec file " + spec_file);
            s = spec_from_json(json::parse(in));
        } else if (!twist.empty()) {
            s.H = H.empty() ? "Z2" : H;
            s.K = K.empty() ? "Z2" : K;
            s.twist = twist;
        } else {
            throw std::invalid_argument("provide --preset, --spec, or --H/--K/--twist");
        }
        s.radius = radius;
        s.level = level;
        return s;
    }
};

void render(const json& j, const std::string& prefix = "") {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) render(v, prefix.empty() ? k : prefix + "." + k);
    } else if (j.is_array()) {
        std::cout << prefix << ": " << j.dump() << "\n";
    } else {
        std::cout << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

void emit(const json& j, bool as_json) {
    if (as_json) std::cout << j.dump(2) << "\n";
    else render(j);
}

HadamardMatrix load_matrix(const std::string& arg) {
    if (arg.rfind("fourier:", 0) == 0) return fourier_matrix(parse_group(arg.substr(8)));
    if (arg.rfind("preset:", 0) == 0) {
        WordContext ctx = spec_context(spec_from_preset(arg.substr(7)));
        return twisted_tensor_standard(ctx.H, ctx.K, ctx.twist);
    }
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open matrix file " + arg);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.find('/') != std::string::npos || text.find('t') != std::string::npos)
        return parse_complex_hadamard(text);
    return parse_real_hadamard(text);
}

int run(int argc, char** argv) {
    CLI::App app{"twisted tensor product Hadamard subfactor toolkit"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit the full JSON report");

    auto* analyze = app.add_subcommand("analyze", "full analysis of one twist spec");
    SpecOpts ao;
    ao.attach(analyze);
    std::string dot_dir;
    analyze->add_option("--emit-dot", dot_dir, "directory for DOT graph files");
    analyze->add_option("--radius", ao.radius, "truncation radius for infinite quotients");
    analyze->add_option("--level", ao.level, "numeric relative-commutant level (0..2)");

    auto* classify = app.add_subcommand("classify4", "classify the 4x4 one-parameter family");
    std::string delta;
    classify->add_option("delta", delta, "phase literal for the twist parameter")->required();

    auto* compare = app.add_subcommand("compare", "subfactor verdict for two twist specs");
    SpecOpts ca, cb;
    ca.attach(compare, "-a");
    cb.attach(compare, "-b");

    auto* commut = app.add_subcommand("commutant", "numeric relative-commutant dimensions");
    SpecOpts co;
    co.attach(commut);
    std::string matrix_arg;
    commut->add_option("--matrix", matrix_arg, "matrix file, or fourier:<group>");
    int level = 1;
    commut->add_option("--level", level, "tower level (0..2)");

    auto* four = app.add_subcommand("fourier", "print the Fourier matrix of a group");
    std::string group;
    four->add_option("group", group, "group literal")->required();

    auto* equiv = app.add_subcommand("equiv", "equivalence of two twist specs or matrices");
    SpecOpts ea, eb;
    ea.attach(equiv, "-a");
    eb.attach(equiv, "-b");
    std::string mat_a, mat_b;
    equiv->add_option("--matrix-a", mat_a, "matrix file, or fourier:<group>");
    equiv->add_option("--matrix-b", mat_b, "matrix file, or fourier:<group>");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (analyze->parsed()) {
        emit(cmd_analyze(ao.resolve(), dot_dir), as_json);
    } else if (classify->parsed()) {
        emit(cmd_classify4(delta), as_json);
    } else if (compare->parsed()) {
        emit(cmd_compare(ca.resolve(), cb.resolve()), as_json);
    } else if (commut->parsed()) {
        if (!matrix_arg.empty()) {
            emit(cmd_commutant(load_matrix(matrix_arg), level), as_json);
        } else {
            AnalysisSpec s = co.resolve();
            WordContext ctx = spec_context(s);
            emit(cmd_commutant(twisted_tensor_standard(ctx.H, ctx.K, ctx.twist), level, s),
                 as_json);
        }
    } else if (four->parsed()) {
        std::cout << format_complex_hadamard(fourier_matrix(parse_group(group)));
    } else if (equiv->parsed()) {
        if (!mat_a.empty() || !mat_b.empty()) {
            json r;
            r["equivalent"] = hadamard_equivalent(load_matrix(mat_a), load_matrix(mat_b));
            emit(r, as_json);
        } else {
            emit(cmd_equiv(ea.resolve(), eb.resolve()), as_json);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::length_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        bool refusal = msg.find("exceeds bound") != std::string::npos;
        std::cerr << (refusal ? "refused: " : "error: ") << msg << "\n";
        return refusal ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
