#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string cli_path() {
    const char* p = std::getenv("LIOUVILLE_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string schemas_dir() {
    const char* p = std::getenv("LIOUVILLE_SCHEMAS");
    REQUIRE(p != nullptr);
    return p;
}

RunResult run_cli(const std::string& args) {
    const std::string out_file = "/tmp/liouville_cli_out.txt";
    const std::string err_file = "/tmp/liouville_cli_err.txt";
    const std::string cmd = cli_path() + " " + args + " >" + out_file + " 2>" + err_file;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

// Minimal structural validator for the shipped schema subset
// (type / required / properties / items).
bool validate(const json& schema, const json& value, std::string* why) {
    const std::string type = schema.value("type", "");
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (type == "object") {
        if (!value.is_object()) return fail("expected object");
        for (const auto& req : schema.value("required", json::array()))
            if (!value.contains(req.get<std::string>()))
                return fail("missing required key " + req.get<std::string>());
        if (schema.contains("properties"))
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (value.contains(it.key()) && !validate(it.value(), value[it.key()], why))
                    return false;
        return true;
    }
    if (type == "array") {
        if (!value.is_array()) return fail("expected array");
        if (schema.contains("items"))
            for (const auto& v : value)
                if (!validate(schema["items"], v, why)) return false;
        return true;
    }
    if (type == "number") return value.is_number() ? true : fail("expected number");
    if (type == "integer")
        return value.is_number_integer() || value.is_number_unsigned()
                   ? true
                   : fail("expected integer");
    if (type == "string") return value.is_string() ? true : fail("expected string");
    if (type == "boolean") return value.is_boolean() ? true : fail("expected boolean");
    return true;
}

void check_schema(const std::string& name, const json& value) {
    std::ifstream in(schemas_dir() + "/" + name);
    REQUIRE(in.good());
    json schema;
    in >> schema;
    std::string why;
    const bool ok = validate(schema, value, &why);
    INFO("schema ", name, ": ", why);
    CHECK(ok);
}

} // namespace

TEST_CASE("count subcommand") {
    const RunResult r = run_cli("count --alpha 2.5");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["classes"] == 5);
    REQUIRE(j["breakdown"].size() == 5);
    CHECK(j["breakdown"][0] == "minimal");
    CHECK(j["breakdown"][1] == "singular");
    CHECK(j["breakdown"][2] == "m=1");
    CHECK(j["breakdown"][4] == "m=3");
    check_schema("count.schema.json", j);
}

TEST_CASE("radial subcommand") {
    const RunResult r = run_cli("radial --alpha 1 --lambda 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["solutions"].size() == 2);
    CHECK(std::abs(j["solutions"][0]["Lambda"].get<double>() - 1.068) < 1e-3);
    CHECK(std::abs(j["solutions"][1]["Lambda"].get<double>() - 958.93) < 0.01);
    CHECK(std::abs(j["solutions"][1]["mass"].get<double>() - 48.64) < 0.01);
    check_schema("radial.schema.json", j);
}

TEST_CASE("critical subcommand") {
    const RunResult r = run_cli("critical --alpha 2.5 --m 3 --restarts 40 --seed 7");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["distinct_classes"].size() == 1);
    CHECK(j["distinct_classes"][0]["verdict"] == "polygon");
    CHECK(std::abs(j["distinct_classes"][0]["radius"].get<double>() - 0.6521429) < 1e-6);
    check_schema("critical.schema.json", j);
}

TEST_CASE("hessian subcommand") {
    SUBCASE("csv determinant columns") {
        const RunResult r = run_cli("hessian --alpha 2.5 --m 3 --format csv");
        REQUIRE(r.exit_code == 0);
        std::istringstream lines(r.out);
        std::string header;
        std::getline(lines, header);
        CHECK(header == "p,mu,nu,gamma,det,det_closed_form");
        std::string row;
        int rows = 0;
        while (std::getline(lines, row)) {
            ++rows;
            const size_t c4 = row.rfind(',');
            const std::string closed = row.substr(c4 + 1);
            std::string rest = row.substr(0, c4);
            const size_t c3 = rest.rfind(',');
            const std::string det = rest.substr(c3 + 1);
            CHECK(std::abs(std::stod(det) - std::stod(closed)) < 1e-10);
        }
        CHECK(rows == 3);
    }
    SUBCASE("json validates") {
        const RunResult r = run_cli("hessian --alpha 2.5 --m 3");
        REQUIRE(r.exit_code == 0);
        const json j = json::parse(r.out);
        CHECK(j["zero_count"] == 1);
        CHECK(j["dft_residual"].get<double>() < 1e-11);
        check_schema("hessian.schema.json", j);
    }
}

TEST_CASE("poly subcommands") {
    const RunResult r = run_cli("poly-check --alpha 2.5 --m 3");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["relative_residual"].get<double>() < 1e-12);
    CHECK(j["unit_circle_clearance"].get<double>() > 0.1);
    check_schema("poly-check.schema.json", j);

    const RunResult r2 = run_cli("limit-poly --p 3 --t 1 --s -2");
    REQUIRE(r2.exit_code == 0);
    const json j2 = json::parse(r2.out);
    CHECK(j2["relative_residual"].get<double>() < 1e-12);
    CHECK(std::abs(j2["sum_re"].get<double>() + 3.0) < 1e-9);
    CHECK(j2["max_re"].get<double>() > 0.0);
    check_schema("limit-poly.schema.json", j2);
}

TEST_CASE("bifurcate subcommand") {
    const RunResult r =
        run_cli("bifurcate --alpha 1 --lambda-min 0.25 --lambda-max 7.75 --steps 31");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "lambda,branch,Lambda,mass,sup_norm");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row)) ++rows;
    CHECK(rows == 62); // two branches per grid point
}

TEST_CASE("modes subcommand") {
    const RunResult r = run_cli("modes --alpha 1 --lambda 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    check_schema("modes.schema.json", j);
    REQUIRE(j["degeneracies"].size() == 2);
    CHECK(std::abs(j["degeneracies"][0]["lambda"].get<double>() - 8.0) < 1e-12);
    CHECK(std::abs(j["degeneracies"][1]["lambda"].get<double>() - 6.0) < 1e-12);

    const RunResult rc = run_cli("modes --alpha 1 --lambda 1 --format csv");
    REQUIRE(rc.exit_code == 0);
    std::istringstream lines(rc.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "k,delta,s_boundary,f1_boundary,degenerate");
}

TEST_CASE("pde2d-solve subcommand") {
    const RunResult r = run_cli(
        "pde2d-solve --alpha 1 --lambda 1 --nr 24 --nt 24 --init radial-singular "
        "--field-out /tmp/liouville_field.csv");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["residual_norm"].get<double>() < 1e-10);
    check_schema("pde2d-solve.schema.json", j);

    std::ifstream f("/tmp/liouville_field.csv");
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "r,theta,u");
}

TEST_CASE("power-check subcommand") {
    const RunResult r = run_cli("power-check --alpha 3 --lambda 2 --m 2 --nr 24 --nt 24");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["residual"].get<double>() <
          10.0 * std::max(j["solver_residual"].get<double>(), 1e-12));
    check_schema("power-check.schema.json", j);
}

TEST_CASE("pde2d-continue subcommand") {
    const RunResult r = run_cli(
        "pde2d-continue --alpha 1 --lambda-from 4 --lambda-to 2 --steps 3 --nr 24 --nt 24 "
        "--branch singular");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "lambda,peak_r,peak_theta,height,mass,residual_norm,npeaks");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row)) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("thread cap does not change results") {
    const std::string cmd = "critical --alpha 2.5 --m 2 --restarts 24 --seed 5";
    const std::string t1 = "LIOUVILLE_THREADS=1 " + cli_path() + " " + cmd +
                           " >/tmp/liouville_t1.json 2>/dev/null";
    const std::string t4 = "LIOUVILLE_THREADS=4 " + cli_path() + " " + cmd +
                           " >/tmp/liouville_t4.json 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(t1.c_str())) == 0);
    REQUIRE(WEXITSTATUS(std::system(t4.c_str())) == 0);
    std::ifstream f1("/tmp/liouville_t1.json"), f4("/tmp/liouville_t4.json");
    std::stringstream s1, s4;
    s1 << f1.rdbuf();
    s4 << f4.rdbuf();
    CHECK(s1.str() == s4.str());
    CHECK(!s1.str().empty());
}

TEST_CASE("byte-identical reruns") {
    const std::string cmd = "critical --alpha 2.5 --m 2 --restarts 30 --seed 42";
    const RunResult a = run_cli(cmd);
    const RunResult b = run_cli(cmd);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    // round-trip parse and re-serialize is the identity for canonical output
    const json j = json::parse(a.out);
    const RunResult c = run_cli(cmd + " --output /tmp/liouville_rt.json");
    REQUIRE(c.exit_code == 0);
    std::ifstream f("/tmp/liouville_rt.json");
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == a.out);
}

TEST_CASE("structured errors and exit codes") {
    SUBCASE("domain error -> exit 1") {
        const RunResult r = run_cli("poly-check --alpha 1 --m 2");
        CHECK(r.exit_code == 1);
        const json e = json::parse(r.err);
        CHECK(e["error"]["code"] == "DomainError");
        CHECK(e["error"].contains("message"));
    }
    SUBCASE("usage error -> exit 1") {
        const RunResult r = run_cli("radial --alpha 1");
        CHECK(r.exit_code == 1);
        const json e = json::parse(r.err);
        CHECK(e["error"]["code"] == "UsageError");
    }
    SUBCASE("beyond-fold radial -> empty solution list, exit 0") {
        const RunResult r = run_cli("radial --alpha 1 --lambda 9");
        CHECK(r.exit_code == 0);
        const json j = json::parse(r.out);
        CHECK(j["solutions"].empty());
    }
}
