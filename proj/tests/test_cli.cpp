#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "psido/cli.hpp"
#include "psido/quantization.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = psido::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(PSIDO_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / ("psido_cli_" + name);
    std::ofstream(p) << content;
    return p.string();
}

Json run_json(std::vector<std::string> args) {
    args.insert(args.begin(), "--json");
    const Result r = run(args);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    return Json::parse(r.out);
}

}  // namespace

TEST_CASE("symbol commands") {
    Result r = run({"symbol", "compose", data("xi.sym"), data("x.sym"), "--depth", "full"});
    CHECK(r.code == 0);
    CHECK(r.out == "x*xi - i\n");

    r = run({"symbol", "principal", data("ann.sym")});
    CHECK(r.code == 0);
    CHECK(r.out == "e^{i*theta}\n");

    r = run({"symbol", "check", data("ann.sym"), "--order", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("pass", 0) == 0);

    CHECK(run({"symbol", "check", data("ann.sym"), "--order", "0"}).code == psido::cli::kUnreliable);

    const Json compat = run_json({"symbol", "compat", data("pair.sig")});
    CHECK(compat["result"]["compatible"] == true);

    const Json rec = run_json({"symbol", "reconstruct", data("pair.sig")});
    CHECK(rec["result"]["round_trip"] == true);

    const Json principal = run_json({"symbol", "principal", data("product.bsym")});
    CHECK(principal["result"]["sigma1"]["factor"] == 1);
}

TEST_CASE("index commands") {
    const Json analytic = run_json({"index", "analytic", data("ann.sym"), "-N", "64"});
    CHECK(analytic["result"]["value"] == 1);
    CHECK(analytic["result"]["reliable"] == true);
    CHECK(analytic["result"]["principal_winding"] == 1);

    const Json heat = run_json({"index", "analytic", data("ann.sym"), "-N", "48", "--strategy", "heat"});
    CHECK(heat["result"]["method"] == "heat_trace");
    CHECK(heat["result"]["value"] == 1);

    const Json mult = run_json({"index", "multiplicativity", data("f.sym"), data("g.sym")});
    CHECK(mult["result"]["pass"] == true);
    CHECK(mult["result"]["product"]["value"] == -1);
    CHECK(mult["result"]["first"]["value"] == 1);
    CHECK(mult["result"]["second"]["value"] == -1);

    const Json top = run_json({"index", "topological", data("pair.sig"), "-m", "2"});
    CHECK(top["result"]["value"] == 1);

    // a threshold in the bulk of the spectrum is unreliable
    CHECK(run({"index", "analytic", data("ann.sym"), "-N", "32", "--tau", "31"}).code == psido::cli::kUnreliable);
    // the loop of pair.sig has non-invertible values
    CHECK(run({"index", "family", data("pair.sig"), "-N", "8"}).code == psido::cli::kPrecondition);
}

TEST_CASE("ktheory commands") {
    const Json paper = run_json({"ktheory", "paper"});
    bool found = false;
    for (const auto& e : paper["result"]["entries"])
        if (e["name"] == "Sigma") {
            found = true;
            CHECK(e["K0"] == "Z");
            CHECK(e["K1"] == "Z");
        }
    CHECK(found);
    CHECK(paper["result"]["audit"] == true);

    const Json mv = run_json({"ktheory", "mv", data("diag.kd")});
    CHECK(mv["result"]["K0"] == "0");
    CHECK(mv["result"]["K1"] == "0");

    const Json six = run_json({"ktheory", "sixterm", data("ext.kd")});
    CHECK(six["result"]["K0"] == "Z");
    CHECK(six["result"]["K1"] == "0");

    const Json sig = run_json({"ktheory", "mv", data("symbol_algebra.kd")});
    CHECK(sig["result"]["K0"] == "Z");
    CHECK(sig["result"]["K1"] == "Z");

    const Json kun = run_json({"ktheory", "kunneth", data("kunneth.kd")});
    CHECK(kun["result"]["K0"] == "Z^2");

    // an undetermined extension is a warning, not a failure
    const std::string amb = temp_file("amb.kd", "kind = sixterm ideal = [Z/2, 0] quotient = [Z/2, 0] delta = 0 eps = 0");
    const Result r = run({"ktheory", "sixterm", amb});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);

    CHECK(run({"ktheory", "mv", data("ext.kd")}).code == psido::cli::kConfigError);
    CHECK(run({"ktheory", "mv"}).code == psido::cli::kConfigError);
}

TEST_CASE("quantize writes matrices") {
    const fs::path out = fs::temp_directory_path() / "psido_cli_ann.mat";
    CHECK(run({"quantize", data("ann.sym"), "-N", "6", "--out", out.string()}).code == 0);
    std::ifstream in(out);
    const psido::CMatrix m = psido::read_matrix_text(in);
    CHECK(m.rows() == 6);
    CHECK(std::abs(m(0, 1) - std::complex<double>(std::sqrt(2.0), 0)) < 1e-15);

    const fs::path bin = fs::temp_directory_path() / "psido_cli_ann.bin";
    CHECK(run({"quantize", data("ann.sym"), "-N", "6", "--out", bin.string(), "--binary"}).code == 0);
    std::ifstream bin_in(bin, std::ios::binary);
    CHECK(psido::read_matrix_binary(bin_in) == m);
}

TEST_CASE("exit codes for bad input") {
    CHECK(run({}).code == psido::cli::kConfigError);
    CHECK(run({"frobnicate"}).code == psido::cli::kConfigError);
    CHECK(run({"symbol", "principal", "/nonexistent.sym"}).code == psido::cli::kConfigError);
    CHECK(run({"symbol", "principal", data("pair.sig")}).code == psido::cli::kConfigError);

    const std::string bad = temp_file("bad.sym", "[(1, 1, 1),\n (2, 0 1)]");
    const Result r = run({"symbol", "principal", bad});
    CHECK(r.code == psido::cli::kConfigError);
    CHECK(r.err.find("line 2") != std::string::npos);

    const std::string nonpoly = temp_file("nonpoly.sym", "[(-1, 1, 1)]");
    CHECK(run({"quantize", nonpoly, "-N", "4"}).code == psido::cli::kPrecondition);
    CHECK(run({"quantize", data("ann.sym"), "-N", "0"}).code == psido::cli::kConfigError);
    CHECK(run({"quantize", data("ann.sym"), "-N", "513"}).code == psido::cli::kConfigError);
    CHECK(run({"index", "analytic", data("ann.sym"), "--strategy", "magic"}).code == psido::cli::kConfigError);
    CHECK(run({"symbol", "compose", data("x.sym"), data("x.sym"), "--depth", "-1"}).code == psido::cli::kConfigError);

    const Result help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("ktheory") != std::string::npos);
}

TEST_CASE("parser warnings surface in structured output") {
    const std::string dup = temp_file("dup.sym", "[(1, 1, 1), (1, 1, 1)]");
    const Result r = run({"--json", "symbol", "principal", dup});
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["warnings"].size() == 1);
    CHECK(j["result"]["principal"] == "2*e^{i*theta}");
}

TEST_CASE("structured output is deterministic") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"--json", "index", "analytic", data("ann.sym"), "-N", "48"},
          std::vector<std::string>{"--json", "ktheory", "paper"},
          std::vector<std::string>{"--json", "demo", "--quick"}}) {
        const Result a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("demo schema") {
    const Json d = run_json({"demo", "--quick"});
    const Json& r = d["result"];
    CHECK(r["mode"] == "quick");
    CHECK(r["all_pass"] == true);
    CHECK(r["failed"] == 0);
    CHECK(r["passed"] == r["checks"].size());
    for (const auto& c : r["checks"]) {
        CHECK(c.contains("name"));
        CHECK(c["pass"].is_boolean());
        CHECK(c["detail"].is_string());
    }
}
