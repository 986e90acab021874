#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "biset/cli.hpp"
#include "biset/kernels.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"biset"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = biset::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("biset_cli_" + name); }

fs::path write_file(const std::string& name, const std::string& content) {
    const auto path = scratch(name);
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("identity on the canonical metric passes") {
    const auto r = invoke({"identity", "--metric", "canonical", "--samples", "1000", "--seed", "7"});
    REQUIRE(r.code == biset::cli::kPass);
    const auto j = json::parse(r.out);
    CHECK(j["schema"] == "biset.identity/1");
    CHECK(j["ps_residual"]["max"].get<double>() <= 1e-9);
    CHECK(j["relation1_residual"]["max"].get<double>() <= 1e-9);
    CHECK(j["evaluated"] == 1000);
}

TEST_CASE("recover on the three-by-two table passes") {
    const auto path = write_file("table.csv", "0,3\n1,5\n2,7\n");
    const auto r = invoke({"recover", "--input", path.string()});
    REQUIRE(r.code == biset::cli::kPass);
    const auto j = json::parse(r.out);
    CHECK(j["schema"] == "biset.recover/1");
    CHECK(j["residual"].get<double>() <= 1e-12);
    CHECK(j["x"].size() == 3);
    CHECK(j["xi"].size() == 2);
    CHECK(j["eta"].size() == 2);
    CHECK(j.contains("gauge"));
    fs::remove(path);
}

TEST_CASE("rank on the non-PS control fails with rank-6 samples") {
    const auto r = invoke({"rank", "--metric", "x*xi + x^2*eta", "--samples", "100", "--seed", "7"});
    CHECK(r.code == biset::cli::kFail);
    const auto j = json::parse(r.out);
    CHECK(j["rank6_count"].get<int>() >= 99);
    CHECK(j["max_rank"] == 6);

    const auto canon = invoke({"rank", "--samples", "100"});
    CHECK(canon.code == biset::cli::kPass);
    CHECK(json::parse(canon.out)["max_rank"] == 5);
}

TEST_CASE("verdicts map to exit codes") {
    CHECK(invoke({"minors", "--samples", "100"}).code == biset::cli::kPass);
    CHECK(invoke({"minors", "--metric", "x*xi + x^2*eta", "--samples", "100"}).code == biset::cli::kFail);
    CHECK(invoke({"identity", "--metric-general", "chi=cubic,phi=exp,psi1=exp_sum,psi2=eta", "--samples", "200"}).code ==
          biset::cli::kPass);
    CHECK(invoke({"identity", "--metric", "x*xi + x^2*eta", "--samples", "200"}).code == biset::cli::kFail);
    CHECK(invoke({"motions", "--apply", "2,3", "--point", "1,4,5", "--verify", "100"}).code == biset::cli::kPass);
    CHECK(invoke({"pde", "--case", "a0", "--chi", "cubic", "--samples", "200"}).code == biset::cli::kPass);
    CHECK(invoke({"pde", "--case", "anonzero", "--sigma", "id", "--tau", "exp", "--samples", "200"}).code ==
          biset::cli::kPass);
    // φ = 1 does not solve the characteristic equations for σ = 1
    CHECK(invoke({"pde", "--case", "anonzero", "--sigma", "const:1", "--phi", "const:1", "--psi", "id"}).code ==
          biset::cli::kFail);

    const auto ps = write_file("ps.csv", "0,3\n1,5\n2,7\n");
    const auto bad = write_file("bad.csv", "0,0\n1,0\n0,1\n");
    CHECK(invoke({"detect", "--input", ps.string()}).code == biset::cli::kPass);
    CHECK(invoke({"detect", "--input", bad.string()}).code == biset::cli::kFail);
    fs::remove(ps);
    fs::remove(bad);
}

TEST_CASE("usage and input errors exit with code 2") {
    CHECK(invoke({}).code == biset::cli::kUsage);
    CHECK(invoke({"frobnicate"}).code == biset::cli::kUsage);
    CHECK(invoke({"identity", "--bogus"}).code == biset::cli::kUsage);
    CHECK(invoke({"identity", "--samples", "many"}).code == biset::cli::kUsage);
    CHECK(invoke({"identity", "--range", "2,1"}).code == biset::cli::kUsage);
    CHECK(invoke({"identity", "--format", "xml"}).code == biset::cli::kUsage);
    CHECK(invoke({"motions", "--apply", "0,1", "--point", "1,1,1"}).code == biset::cli::kUsage);
    CHECK(invoke({"identity", "--metric-general", "chi=id,phi=id,psi1=xi,psi2=two_xi"}).code == biset::cli::kUsage);

    const auto syntax = invoke({"identity", "--metric", "x + * xi"});
    CHECK(syntax.code == biset::cli::kUsage);
    CHECK(syntax.err.find("offset 4") != std::string::npos);

    const auto missing = invoke({"recover", "--input", scratch("absent.csv").string()});
    CHECK(missing.code == biset::cli::kUsage);
    CHECK(missing.err.find("absent.csv") != std::string::npos);

    const auto flat = write_file("flat.csv", "4,7\n4,7\n4,7\n");
    CHECK(invoke({"recover", "--input", flat.string()}).code == biset::cli::kUsage);
    const auto holes = write_file("holes.csv", "0,3\n1,NA\n2,7\n");
    CHECK(invoke({"recover", "--input", holes.string()}).code == biset::cli::kUsage);
    CHECK(invoke({"detect", "--input", holes.string()}).code == biset::cli::kUsage);
    fs::remove(flat);
    fs::remove(holes);
}

TEST_CASE("every subcommand is byte-reproducible") {
    const auto table = write_file("det.csv", "0,3\n1,5\n2,7\n3,9.5\n");
    const std::vector<std::vector<std::string>> runs{
        {"identity", "--samples", "300", "--seed", "3"},
        {"minors", "--metric", "exp(x*xi) + eta", "--samples", "300", "--seed", "3"},
        {"rank", "--metric", "x*xi + x^2*eta", "--samples", "300", "--seed", "3"},
        {"motions", "--verify", "300", "--seed", "3"},
        {"pde", "--case", "anonzero", "--sigma", "id", "--tau", "exp", "--samples", "300", "--seed", "3"},
        {"generate", "--p", "6", "--q", "4", "--noise", "0.01", "--seed", "3"},
        {"detect", "--input", table.string(), "--seed", "3"},
        {"recover", "--input", table.string()},
    };
    for (const auto& args : runs) {
        auto call = [&] {
            std::vector<const char*> argv{"biset"};
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = biset::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
            return std::pair{code, out.str()};
        };
        biset::set_thread_cap(1);
        const auto first = call();
        biset::set_thread_cap(4);
        const auto second = call();
        const auto third = call();
        INFO(args.front());
        CHECK(!first.second.empty());
        CHECK(first == second);
        CHECK(second == third);
    }
    fs::remove(table);
}

TEST_CASE("formats, output files and config") {
    const auto text = invoke({"identity", "--samples", "50", "--format", "text"});
    CHECK(text.code == biset::cli::kPass);
    CHECK(text.out.find("schema: biset.identity/1") != std::string::npos);
    const auto csv = invoke({"identity", "--samples", "50", "--format", "csv"});
    // one header row of flattened keys, one row of values
    std::istringstream lines(csv.out);
    std::string header, values, extra;
    std::getline(lines, header);
    std::getline(lines, values);
    CHECK_FALSE(std::getline(lines, extra));
    CHECK(header.rfind("command,", 0) == 0);
    CHECK(header.find(",schema,") != std::string::npos);
    CHECK(values.find(",biset.identity/1,") != std::string::npos);

    const auto report = scratch("report.json");
    const auto written = invoke({"identity", "--samples", "50", "--output", report.string()});
    CHECK(written.out.empty());
    std::ifstream in(report);
    const auto j = json::parse(in);
    CHECK(j["samples"] == 50);
    fs::remove(report);

    const auto config = write_file("config.json", R"({"metric": "x*xi + x^2*eta", "samples": 40, "seed": 9})");
    const auto from_config = json::parse(invoke({"identity", "--config", config.string()}).out);
    CHECK(from_config["samples"] == 40);
    CHECK(from_config["seed"] == 9);
    CHECK(from_config["verdict"] == false);
    const auto flag_wins = json::parse(invoke({"identity", "--config", config.string(), "--samples", "30"}).out);
    CHECK(flag_wins["samples"] == 30);
    fs::remove(config);
}

TEST_CASE("generate round-trips through detect and recover") {
    const auto coords = scratch("coords.json");
    const auto r = invoke({"generate", "--p", "8", "--q", "5", "--seed", "11", "--coords-out", coords.string()});
    REQUIRE(r.code == biset::cli::kPass);
    const auto table = write_file("gen.csv", r.out);
    const auto d = json::parse(invoke({"detect", "--input", table.string()}).out);
    CHECK(d["verdict"] == true);
    CHECK(d["max_residual"].get<double>() <= 1e-10);
    CHECK(d["corteges_checked"] == 560);
    const auto rec = json::parse(invoke({"recover", "--input", table.string()}).out);
    CHECK(rec["residual"].get<double>() <= 1e-10);
    std::ifstream in(coords);
    const auto truth = json::parse(in);
    CHECK(truth["x"].size() == 8);
    fs::remove(table);
    fs::remove(coords);
}
