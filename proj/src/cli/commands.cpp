#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "psido/bisingular.hpp"
#include "psido/cli.hpp"
#include "psido/errors.hpp"
#include "psido/index.hpp"
#include "psido/ktheory.hpp"
#include "psido/quantization.hpp"
#include "psido/symbol.hpp"

namespace psido::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kMaxSize = 512;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a command ran but its result is unreliable or a check failed.
struct Unreliable {
    Json payload;
    std::string text;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string extension(const std::string& path) { return std::filesystem::path(path).extension().string(); }

void require_extension(const std::string& path, std::initializer_list<const char*> allowed) {
    const std::string ext = extension(path);
    for (const char* a : allowed)
        if (ext == a) return;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    throw ConfigError("'" + path + "': expected a " + list + " file");
}

void check_size(int n, const char* name) {
    if (n < 1 || n > kMaxSize)
        throw ConfigError(std::string(name) + " must lie in [1, " + std::to_string(kMaxSize) + "]");
}

struct Ctx {
    std::ostream& out;
    std::ostream& err;
    bool json = false;
    Json warnings = Json::array();

    void warn(const std::vector<std::string>& ws) {
        for (const auto& w : ws) {
            err << "warning: " << w << '\n';
            warnings.push_back(w);
        }
    }
    // Prints either the text or the JSON payload (with the collected warnings).
    void emit(const std::string& command, Json payload, const std::string& text) {
        if (json) {
            Json doc;
            doc["command"] = command;
            doc["result"] = std::move(payload);
            doc["warnings"] = warnings;
            out << doc.dump(2) << '\n';
        } else {
            out << text;
            if (!text.empty() && text.back() != '\n') out << '\n';
        }
    }
};

ShubinSymbol load_symbol(Ctx& ctx, const std::string& path) {
    require_extension(path, {".sym"});
    ParsedSymbol p = parse_symbol_document(read_file(path));
    ctx.warn(p.warnings);
    return p.symbol;
}

BisingularSymbol load_bisingular(Ctx& ctx, const std::string& path) {
    require_extension(path, {".bsym"});
    ParsedBisingular p = parse_bisingular_document(read_file(path));
    ctx.warn(p.warnings);
    return p.symbol;
}

ParsedSigma load_sigma(Ctx& ctx, const std::string& path) {
    require_extension(path, {".sig"});
    ParsedSigma p = parse_sigma_document(read_file(path));
    ctx.warn(p.warnings);
    return p;
}

SigmaPair load_pair(Ctx& ctx, const std::string& path) {
    ParsedSigma p = load_sigma(ctx, path);
    if (!p.F || !p.G) throw ConfigError("'" + path + "' needs both F and G blocks");
    return SigmaPair::make(*p.F, *p.G);
}

std::string symbol_text(const ShubinSymbol& s) {
    return s.is_polynomial_class() && !s.is_zero() ? to_polynomial_string(s) : to_string(s);
}

std::optional<int> parse_depth(const std::string& depth) {
    if (depth == "full") return std::nullopt;
    try {
        size_t used = 0;
        int d = std::stoi(depth, &used);
        if (used != depth.size() || d < 0) throw std::invalid_argument(depth);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("--depth must be 'full' or a non-negative integer");
    }
}

Json check_json(const CheckReport& r) {
    return Json{{"pass", r.pass}, {"applicable", r.applicable}, {"worst_ratio", r.worst_ratio}, {"detail", r.detail}};
}

std::string check_text(const CheckReport& r) {
    std::ostringstream os;
    os << (r.applicable ? (r.pass ? "pass" : "fail") : "not applicable") << '\n'
       << "worst_ratio: " << r.worst_ratio << '\n'
       << r.detail << '\n';
    return os.str();
}

Json index_json(const IndexReport& r) {
    Json d = Json::object();
    for (const auto& [k, v] : r.diagnostics) d[k] = v;
    return Json{{"method", to_string(r.method)}, {"value", r.value},       {"residual", r.residual},
                {"reliable", r.reliable},        {"truncations", r.truncations}, {"diagnostics", d},
                {"note", r.note}};
}

Json loop_json(const SymbolValuedLoop& L) {
    Json coeffs = Json::object();
    for (const auto& [k, s] : L.coeffs()) coeffs[std::to_string(k)] = to_string(s);
    return Json{{"factor", static_cast<int>(L.factor())}, {"value_order", L.value_order()}, {"coeffs", coeffs}};
}

Json group_pair_json(const FGAbGroup& k0, const FGAbGroup& k1) {
    return Json{{"K0", to_string(k0)}, {"K1", to_string(k1)}};
}

Json solve_json(const SolveResult& r, bool audited) {
    auto ext = [](const Extension& e) {
        return Json{{"sub", to_string(e.sub)}, {"quotient", to_string(e.quotient)}, {"determined", e.determined}};
    };
    return Json{{"K0", to_string(r.K0)},      {"K1", to_string(r.K1)},
                {"ambiguous", r.ambiguous},   {"extension_K0", ext(r.ext0)},
                {"extension_K1", ext(r.ext1)}, {"audit", audited}};
}

std::string solve_text(const SolveResult& r, bool audited, const char* name) {
    std::ostringstream os;
    os << "K0(" << name << ") = " << to_string(r.K0) << '\n' << "K1(" << name << ") = " << to_string(r.K1) << '\n';
    auto ext = [&](const char* k, const Extension& e) {
        if (!e.determined)
            os << k << ": extension of " << to_string(e.quotient) << " by " << to_string(e.sub)
               << " not determined; split candidate shown\n";
    };
    ext("K0", r.ext0);
    ext("K1", r.ext1);
    os << "exactness audit: " << (audited ? "pass" : "FAIL") << '\n';
    return os.str();
}

// ------------------------------------------------------------- symbol

void cmd_symbol_check(Ctx& ctx, const std::string& file, std::optional<int> order) {
    ShubinSymbol s = load_symbol(ctx, file);
    const int claimed = order.value_or(s.is_zero() ? 0 : s.order());
    CheckReport r = seminorm_check(s, claimed);
    ctx.emit("symbol check", check_json(r), check_text(r));
    if (!r.pass) throw Unreliable{};
}

void cmd_symbol_principal(Ctx& ctx, const std::string& file) {
    if (extension(file) == ".bsym") {
        BisingularSymbol a = load_bisingular(ctx, file);
        SymbolValuedLoop s1 = sigma1(a), s2 = sigma2(a);
        BiTrigPoly common = tsigma2(s1);
        Json j{{"sigma1", loop_json(s1)}, {"sigma2", loop_json(s2)}, {"pointwise", to_string(common)}};
        ctx.emit("symbol principal", j,
                 "sigma1: " + to_string(s1) + "\nsigma2: " + to_string(s2) + "\npointwise: " + to_string(common));
        return;
    }
    ShubinSymbol s = load_symbol(ctx, file);
    TrigPoly p = sh_principal(s);
    ctx.emit("symbol principal", Json{{"order", s.is_zero() ? 0 : s.order()}, {"principal", to_string(p)}},
             to_string(p));
}

void cmd_symbol_compose(Ctx& ctx, const std::string& a, const std::string& b, const std::string& depth) {
    const std::optional<int> d = parse_depth(depth);
    if (extension(a) == ".bsym") {
        BisingularSymbol r = bs_compose(load_bisingular(ctx, a), load_bisingular(ctx, b), d);
        const std::string doc = write_bisingular_document(r);
        ctx.emit("symbol compose", Json{{"order", {r.order().m1, r.order().m2}}, {"document", doc}}, doc);
        return;
    }
    ShubinSymbol r = kn_compose(load_symbol(ctx, a), load_symbol(ctx, b), d);
    ctx.emit("symbol compose", Json{{"symbol", to_string(r)}, {"text", symbol_text(r)}}, symbol_text(r));
}

void cmd_symbol_compat(Ctx& ctx, const std::string& file) {
    ParsedSigma p = load_sigma(ctx, file);
    if (!p.F || !p.G) throw ConfigError("'" + file + "' needs both F and G blocks");
    const bool ok = compat_check(*p.F, *p.G);
    ctx.emit("symbol compat",
             Json{{"compatible", ok}, {"tsigma2_F", to_string(tsigma2(*p.F))}, {"tsigma1_G", to_string(tsigma1(*p.G))}},
             ok ? "compatible" : "incompatible: " + to_string(tsigma2(*p.F)) + " != " + to_string(tsigma1(*p.G)));
    if (!ok) throw Unreliable{};
}

void cmd_symbol_reconstruct(Ctx& ctx, const std::string& file) {
    SigmaPair p = load_pair(ctx, file);
    BisingularSymbol a = reconstruct(p);
    const bool round_trip = sigma1(a) == p.F && sigma2(a) == p.G;
    const std::string doc = write_bisingular_document(a);
    ctx.emit("symbol reconstruct", Json{{"round_trip", round_trip}, {"document", doc}}, doc);
    if (!round_trip) throw Unreliable{};
}

void cmd_symbol_kernel(Ctx& ctx, const std::string& file) {
    CheckReport r = kernel_order_check(load_bisingular(ctx, file));
    ctx.emit("symbol kernel", check_json(r), check_text(r));
    if (r.applicable && !r.pass) throw Unreliable{};
}

// ------------------------------------------------------------- quantize

void cmd_quantize(Ctx& ctx, const std::string& file, int N, int N2, const std::string& out_path, bool binary) {
    check_size(N, "-N");
    TruncatedOperator op = extension(file) == ".bsym"
                               ? (check_size(N2, "--N2"), quantize_bisingular(load_bisingular(ctx, file), N, N2))
                               : quantize_poly(load_symbol(ctx, file), N);
    const CMatrix m = op.matrix();
    if (!out_path.empty()) {
        std::ofstream f(out_path, binary ? std::ios::binary : std::ios::out);
        if (!f) throw ConfigError("cannot write '" + out_path + "'");
        binary ? write_matrix_binary(f, m) : write_matrix_text(f, m);
        ctx.emit("quantize",
                 Json{{"rows", m.rows()}, {"cols", m.cols()}, {"buffer", op.buffer()}, {"path", out_path},
                      {"format", binary ? "binary" : "text"}},
                 "wrote " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix to " + out_path);
        return;
    }
    std::ostringstream os;
    write_matrix_text(os, m);
    ctx.emit("quantize", Json{{"rows", m.rows()}, {"cols", m.cols()}, {"buffer", op.buffer()}, {"matrix", os.str()}},
             os.str());
}

// ------------------------------------------------------------- index

IndexStrategy make_strategy(const std::string& name, double tau, double t) {
    IndexStrategy s;
    if (name == "gap") s = IndexStrategy::gap();
    else if (name == "heat") s = IndexStrategy::heat();
    else throw ConfigError("--strategy must be 'gap' or 'heat'");
    if (tau > 0) s.tau = tau;
    else if (tau < 0) throw ConfigError("--tau must be positive");
    if (t > 0) s.t = t;
    else if (t < 0) throw ConfigError("--t must be positive");
    return s;
}

void finish_index(Ctx& ctx, const std::string& command, const IndexReport& r, Json extra = Json::object()) {
    Json j = index_json(r);
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::string text = to_text(r);
    for (auto& [k, v] : extra.items()) text += k + ": " + v.dump() + "\n";
    ctx.emit(command, j, text);
    if (!r.reliable) throw Unreliable{};
}

void cmd_index_analytic(Ctx& ctx, const std::string& file, int N, const IndexStrategy& s) {
    check_size(N, "-N");
    ShubinSymbol sym = load_symbol(ctx, file);
    IndexReport r = analytic_index(quantize_poly(sym, N), s);
    Json extra = Json::object();
    try {
        extra["principal_winding"] = winding(sh_principal(sym)).value;
    } catch (const PreconditionError&) {
        extra["principal_winding"] = nullptr;
    }
    finish_index(ctx, "index analytic", r, extra);
}

void cmd_index_topological(Ctx& ctx, const std::string& file, int m) {
    finish_index(ctx, "index topological", topological_index(load_pair(ctx, file), m));
}

void cmd_index_family(Ctx& ctx, const std::string& file, int N, const std::string& which) {
    check_size(N, "-N");
    ParsedSigma p = load_sigma(ctx, file);
    const std::optional<SymbolValuedLoop>* L = nullptr;
    if (which == "F") L = &p.F;
    else if (which == "G") L = &p.G;
    else if (which.empty()) L = p.F ? &p.F : &p.G;
    else throw ConfigError("--loop must be F or G");
    if (!*L) throw ConfigError("'" + file + "' has no " + which + " block");
    finish_index(ctx, "index family", family_index(**L, N));
}

void cmd_index_multiplicativity(Ctx& ctx, const std::string& f, const std::string& g, int N1, int N2,
                                const IndexStrategy& s) {
    check_size(N1, "--N1");
    check_size(N2, "--N2");
    MultiplicativityReport r = index_multiplicativity(load_symbol(ctx, f), load_symbol(ctx, g), N1, N2, s);
    Json j{{"pass", r.check.pass},
           {"first", index_json(r.first)},
           {"second", index_json(r.second)},
           {"product", index_json(r.product)}};
    std::ostringstream os;
    os << r.product.value << " = " << r.first.value << " x " << r.second.value << '\n'
       << (r.check.pass ? "pass" : "FAIL") << '\n';
    ctx.emit("index multiplicativity", j, os.str());
    if (!r.check.pass) throw Unreliable{};
}

// ------------------------------------------------------------- ktheory

Json report_json(const KTheoryReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back(Json{{"name", e.name}, {"K0", to_string(e.K0)}, {"K1", to_string(e.K1)},
                               {"provenance", e.provenance}});
    return Json{{"entries", entries}, {"audit", r.audited}, {"ambiguous", r.sigma.ambiguous}};
}

KDiagram load_diagram(const std::string& file, KDiagram::Kind expected) {
    require_extension(file, {".kd"});
    KDiagram d = parse_kd_document(read_file(file));
    if (d.kind != expected) throw ConfigError("'" + file + "' declares a different diagram kind");
    return d;
}

void warn_ambiguity(Ctx& ctx, const SolveResult& r) {
    if (r.ambiguous) ctx.warn({"extension problem not determined by exactness; split candidate reported"});
}

void cmd_ktheory(Ctx& ctx, const std::string& what, const std::string& file) {
    if (what == "paper") {
        KTheoryReport r = paper_instance();
        ctx.emit("ktheory paper", report_json(r), to_text(r));
        if (!r.audited) throw Unreliable{};
        return;
    }
    if (file.empty()) throw ConfigError("ktheory " + what + " needs a .kd file");
    if (what == "mv") {
        KDiagram d = load_diagram(file, KDiagram::Kind::mv);
        SolveResult r = mayer_vietoris(d.pullback);
        const bool ok = audit(r);
        warn_ambiguity(ctx, r);
        ctx.emit("ktheory mv", solve_json(r, ok), solve_text(r, ok, "pullback"));
        if (!ok) throw Unreliable{};
    } else if (what == "sixterm") {
        KDiagram d = load_diagram(file, KDiagram::Kind::sixterm);
        SolveResult r = six_term_solve(d.ideal, d.quotient, d.delta, d.eps);
        const bool ok = audit(r);
        warn_ambiguity(ctx, r);
        ctx.emit("ktheory sixterm", solve_json(r, ok), solve_text(r, ok, "A"));
        if (!ok) throw Unreliable{};
    } else if (what == "kunneth") {
        KDiagram d = load_diagram(file, KDiagram::Kind::kunneth);
        KPair r = kunneth_torsion_free(d.A, d.B);
        ctx.emit("ktheory kunneth", group_pair_json(r.first, r.second),
                 "K0 = " + to_string(r.first) + "\nK1 = " + to_string(r.second));
    } else {
        throw ConfigError("unknown ktheory mode '" + what + "'");
    }
}

// ------------------------------------------------------------- demo

void cmd_demo(Ctx& ctx, bool quick) {
    const auto checks = run_demo(quick);
    Json items = Json::array();
    std::ostringstream os;
    int passed = 0;
    size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
        items.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        passed += c.pass;
        os << (c.pass ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size(), ' ') << "  " << c.detail
           << '\n';
    }
    const int failed = static_cast<int>(checks.size()) - passed;
    os << passed << " passed, " << failed << " failed\n";
    ctx.emit("demo",
             Json{{"mode", quick ? "quick" : "full"},
                  {"checks", items},
                  {"passed", passed},
                  {"failed", failed},
                  {"all_pass", failed == 0}},
             os.str());
    if (failed) throw Unreliable{};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bisingular pseudodifferential symbols, Fredholm indices and K-theory", "psido"};
    app.require_subcommand(1);
    app.fallthrough();
    Ctx ctx{out, err};
    app.add_flag("--json", ctx.json, "structured output on stdout");

    std::string file, file2, depth = "full", strategy = "gap", loop, out_path, kmode;
    int order = 0, N = 64, N1 = 48, N2 = 48, m = 0;
    double tau = 0, t = 0;
    bool binary = false, quick = false;

    auto* symbol = app.add_subcommand("symbol", "symbol algebra")->require_subcommand(1);
    auto* s_check = symbol->add_subcommand("check", "seminorm estimate check of a .sym file");
    s_check->add_option("file", file)->required();
    auto* order_opt = s_check->add_option("--order", order, "claimed order (default: the symbol's order)");
    auto* s_principal = symbol->add_subcommand("principal", "principal symbol(s) of a .sym or .bsym file");
    s_principal->add_option("file", file)->required();
    auto* s_compose = symbol->add_subcommand("compose", "Kohn-Nirenberg composition a # b");
    s_compose->add_option("a", file)->required();
    s_compose->add_option("b", file2)->required();
    s_compose->add_option("--depth", depth, "'full' or a non-negative integer");
    auto* s_compat = symbol->add_subcommand("compat", "compatibility of the F, G blocks of a .sig file");
    s_compat->add_option("file", file)->required();
    auto* s_reconstruct = symbol->add_subcommand("reconstruct", "bisingular symbol with the given principal pair");
    s_reconstruct->add_option("file", file)->required();
    auto* s_kernel = symbol->add_subcommand("kernel", "order drop check for a .bsym with vanishing principal symbols");
    s_kernel->add_option("file", file)->required();

    auto* quant = app.add_subcommand("quantize", "Hermite-basis matrix of a polynomial symbol");
    quant->add_option("file", file)->required();
    quant->add_option("-N", N, "truncation size (factor 1)");
    quant->add_option("--N2", N2, "truncation size of factor 2 for .bsym input");
    quant->add_option("--out", out_path, "write the matrix to this path");
    quant->add_flag("--binary", binary, "binary container instead of text");

    auto* index = app.add_subcommand("index", "Fredholm index")->require_subcommand(1);
    auto* i_analytic = index->add_subcommand("analytic", "analytic index of Op(a) for a .sym file");
    i_analytic->add_option("file", file)->required();
    i_analytic->add_option("-N", N, "truncation size");
    for (auto* c : {i_analytic}) {
        c->add_option("--strategy", strategy, "gap or heat");
        c->add_option("--tau", tau, "spectral threshold (default: automatic)");
        c->add_option("--t", t, "heat-trace time (default: automatic)");
    }
    auto* i_top = index->add_subcommand("topological", "topological index of a .sig pair");
    i_top->add_option("file", file)->required();
    i_top->add_option("-m", m, "splitting parameter of beta");
    auto* i_family = index->add_subcommand("family", "determinant winding of a loop in a .sig file");
    i_family->add_option("file", file)->required();
    i_family->add_option("-N", N, "truncation size");
    i_family->add_option("--loop", loop, "F or G (default: the first present)");
    auto* i_mult = index->add_subcommand("multiplicativity", "ind(P1 # P2) = ind(P1) ind(P2)");
    i_mult->add_option("f", file)->required();
    i_mult->add_option("g", file2)->required();
    i_mult->add_option("--N1", N1, "truncation size of factor 1");
    i_mult->add_option("--N2", N2, "truncation size of factor 2");
    i_mult->add_option("--strategy", strategy, "gap or heat");

    auto* kt = app.add_subcommand("ktheory", "K-theory: paper | mv FILE | sixterm FILE | kunneth FILE");
    kt->add_option("mode", kmode)->required()->check(CLI::IsMember({"paper", "mv", "sixterm", "kunneth"}));
    kt->add_option("file", file);

    auto* demo = app.add_subcommand("demo", "end-to-end reproduction checks");
    demo->add_flag("--quick", quick, "K-theory subset only");

    std::vector<std::string> argv_store{"psido"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (s_check->parsed()) cmd_symbol_check(ctx, file, order_opt->count() ? std::optional<int>(order) : std::nullopt);
        else if (s_principal->parsed()) cmd_symbol_principal(ctx, file);
        else if (s_compose->parsed()) cmd_symbol_compose(ctx, file, file2, depth);
        else if (s_compat->parsed()) cmd_symbol_compat(ctx, file);
        else if (s_reconstruct->parsed()) cmd_symbol_reconstruct(ctx, file);
        else if (s_kernel->parsed()) cmd_symbol_kernel(ctx, file);
        else if (quant->parsed()) cmd_quantize(ctx, file, N, N2, out_path, binary);
        else if (i_analytic->parsed()) cmd_index_analytic(ctx, file, N, make_strategy(strategy, tau, t));
        else if (i_top->parsed()) cmd_index_topological(ctx, file, m);
        else if (i_family->parsed()) cmd_index_family(ctx, file, N, loop);
        else if (i_mult->parsed()) cmd_index_multiplicativity(ctx, file, file2, N1, N2, make_strategy(strategy, 0, 0));
        else if (kt->parsed()) cmd_ktheory(ctx, kmode, file);
        else if (demo->parsed()) cmd_demo(ctx, quick);
        return kOk;
    } catch (const Unreliable&) {
        return kUnreliable;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kUnreliable;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return kPrecondition;
    }
}

}  // namespace psido::cli
