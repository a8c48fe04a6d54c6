#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "page_entropy/cli.hpp"

using page_entropy::cli::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
    std::ifstream in(std::string(PAGE_ENTROPY_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("golden outputs") {
    struct Case {
        std::vector<std::string> args;
        const char* file;
    };
    const Case cases[] = {
        {{"dims", "--model", "fermions", "--V", "4"}, "dims_fermions_V4.csv"},
        {{"beta", "--model", "spin_j(1)", "--grid", "0.5:1.5:3"}, "beta_spin1.csv"},
        {{"page", "--model", "spin_j(1)", "--V", "8", "--N", "12"}, "page_spin1_V8.csv"},
        {{"variance", "--model", "fermions", "--V", "10", "--N", "5"}, "variance_fermions_V10.csv"},
        {{"scaling", "--model", "fermions", "--V", "16,32", "--n", "0.5", "--f", "0.5"}, "scaling_fermions.csv"},
        {{"mc", "--model", "fermions", "--V", "8", "--N", "4", "--samples", "50", "--seed", "3"}, "mc_fermions_V8.csv"},
        {{"ed", "--V", "5", "--M", "0", "--window", "5", "--VA", "1,2"}, "ed_spin1_V5.csv"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.file);
        const auto r = invoke(c.args);
        CHECK(r.code == 0);
        CHECK(r.out == golden(c.file));
    }
}

TEST_CASE("outputs are deterministic across thread counts") {
    const auto a = invoke({"mc", "--V", "8", "--N", "4", "--samples", "64", "--threads", "1"});
    const auto b = invoke({"mc", "--V", "8", "--N", "4", "--samples", "64", "--threads", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto p1 = invoke({"page", "--model", "spin_j(1)", "--V", "10", "--N", "10", "--threads", "1"});
    const auto p3 = invoke({"page", "--model", "spin_j(1)", "--V", "10", "--N", "10", "--threads", "3"});
    CHECK(p1.out == p3.out);
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"page", "--model", "anyons", "--V", "4", "--N", "2"}).code == 2);
    CHECK(invoke({"page", "--V", "4", "--N", "9"}).code == 2);
    CHECK(invoke({"page", "--V", "4"}).code == 2);
    CHECK(invoke({"page", "--V", "4", "--N", "2", "--format", "xml"}).code == 2);
    const auto big = invoke({"mc", "--V", "40", "--N", "20", "--samples", "10"});
    CHECK(big.code == 4);
    CHECK(!big.err.empty());
    CHECK(invoke({"ed", "--V", "14", "--M", "0"}).code == 4);
}

TEST_CASE("config file with flag override") {
    const std::string path = "page_entropy_cli_config.json";
    {
        std::ofstream cfg(path);
        cfg << R"({"model": "fermions", "V": [8], "N": 4, "VA": [4]})";
    }
    const auto base = invoke({"page", "--config", path});
    CHECK(base.code == 0);
    const auto direct = invoke({"page", "--model", "fermions", "--V", "8", "--N", "4", "--VA", "4"});
    CHECK(base.out == direct.out);
    const auto over = invoke({"page", "--config", path, "--VA", "2"});
    CHECK(over.out == invoke({"page", "--model", "fermions", "--V", "8", "--N", "4", "--VA", "2"}).out);
    {
        std::ofstream cfg(path);
        cfg << R"({"bogus": 1})";
    }
    CHECK(invoke({"page", "--config", path}).code == 2);
    std::remove(path.c_str());
}

TEST_CASE("json output parses") {
    const auto r = invoke({"page", "--V", "6", "--N", "3", "--format", "json"});
    CHECK(r.code == 0);
    CHECK((r.out.front() == '{' || r.out.front() == '['));
}
