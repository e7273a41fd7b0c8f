#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "eif/csv.hpp"
#include "eif/format.hpp"

using namespace eif;
using namespace eif::cli;

namespace {

const char* kExample1 = R"(# example 1
distribution.family = beta
distribution.alpha = 3
distribution.beta = 5
model.kind = mean_constrained
model.mu = 0.375
functional.kind = avg_density
point.x = 0.6
perturbation.epsilon = 1e-6
perturbation.lambda = 1e-2
seed = 99
)";

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("eif_test_" + name)).string();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Run {
    int code;
    std::string out, err;
};

Run run(int (*cmd)(const Invocation&, std::ostream&, std::ostream&), const std::string& text,
        std::optional<std::string> data = {}, std::optional<std::string> out_path = {}) {
    Invocation inv;
    inv.config = parse_config(text);
    inv.data = data;
    inv.out = out_path;
    std::ostringstream out, err;
    const int code = cmd(inv, out, err);
    return {code, out.str(), err.str()};
}

double field(const std::string& csv, std::size_t row, std::size_t col) {
    std::istringstream in(csv);
    std::string line;
    for (std::size_t i = 0; i <= row; ++i) std::getline(in, line);
    return parse_number(split(line, ',').at(col), "field");
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse_config(kExample1);
    CHECK(c.family == "beta");
    CHECK(c.single.alpha == 3.0);
    CHECK(c.mu.value() == 0.375);
    CHECK(c.x == Point{0.6});
    CHECK(c.epsilons.size() == 8);
    CHECK_THROWS_AS(parse_config(std::string(kExample1) + "bogus.key = 1\n"), Error);
    CHECK_THROWS_AS(parse_config(std::string(kExample1) + "model.mu = 0.4\n"), Error);
    CHECK_THROWS_AS(parse_config(std::string(kExample1) + "grid.epsilons = 1e-3; 1e-2\n"), Error);
    CHECK_THROWS_AS(parse_config(std::string(kExample1) + "grid.lambdas = 1e-1; -1e-2\n"), Error);
    CHECK_THROWS_AS(parse_config("distribution.family = beta\nnot a key value line\n"), Error);
}

TEST_CASE("printed config re-parses to the same config") {
    const RunConfig a = parse_config(kExample1);
    CHECK(parse_config(print_config(a)) == a);
    RunConfig b = parse_config(
        "distribution.family = sequential\n"
        "distribution.factors = 2\n"
        "distribution.factor.0.kind = discrete\n"
        "distribution.factor.0.support = 0; 1; 2\n"
        "distribution.factor.0.masses = 0.2; 0.3; 0.5\n"
        "distribution.factor.1.kind = normal\n"
        "distribution.factor.1.mean = 1 + 0.5*x0\n"
        "distribution.factor.1.variance = 2\n"
        "model.kind = tilted\nmodel.basis = x0; x1\n"
        "functional.kind = mean\nfunctional.component = 1\n"
        "validate.points = 0; 1 | 2; 0.5\n"
        "perturbation.kernel = full\n");
    CHECK(parse_config(print_config(b)) == b);
    CHECK(print_config(parse_config(print_config(b))) == print_config(b));
}

TEST_CASE("point command") {
    const Run r = run(run_point, kExample1);
    CHECK(r.code == 0);
    CHECK(field(r.out, 1, 2) == doctest::Approx(-0.963).epsilon(0.005));
}

TEST_CASE("point command errors map to exit codes") {
    std::string text = kExample1;
    text.replace(text.find("model.kind"), 46, "");
    const Run no_model = run(run_point, text);
    CHECK(no_model.code == 1);
    CHECK(no_model.err.find("model.kind") != std::string::npos);

    std::string zero = kExample1;
    zero.replace(zero.find("1e-6"), 4, "0");
    CHECK(run(run_point, zero).code == 1);

    std::string wrong_dim = kExample1;
    wrong_dim.replace(wrong_dim.find("0.6"), 3, "0.6; 0.2");
    CHECK(run(run_point, wrong_dim).code == 1);

    std::string outside = kExample1;
    outside.replace(outside.find("0.6"), 3, "1.6");
    CHECK(run(run_point, outside).code == 2);
}

TEST_CASE("grid command writes both files") {
    const std::string path = temp_path("grid.csv");
    const Run r = run(run_grid, std::string(kExample1) + "grid.epsilons = 1e-6\ngrid.lambdas = 1e-2\n", {}, path);
    CHECK(r.code == 0);
    const std::string grid = slurp(path);
    const std::string plateau = slurp(sibling_path(path, ".plateau.csv"));
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 2);
    CHECK(plateau == "consensus,digits,cell_count,eps_range,lambda_range\n,3,0,,\n");
    CHECK(run(run_grid, kExample1, {}, std::string("/nonexistent-dir/x/grid.csv")).code == 1);
}

TEST_CASE("onestep command") {
    const std::string one = temp_path("one.csv"), empty = temp_path("empty.csv"), bad = temp_path("bad.csv");
    write(one, "x0\n0.6\n");
    write(empty, "x0\n");
    write(bad, "x0\n0.5\n0.2,0.1\n");
    const Run r = run(run_onestep, kExample1, one);
    REQUIRE(r.code == 0);
    const Run p = run(run_point, kExample1);
    CHECK(field(r.out, 1, 4) == doctest::Approx(field(p.out, 1, 2)).epsilon(1e-10));
    CHECK(r.err.find("n = 1") != std::string::npos);
    CHECK(run(run_onestep, kExample1, empty).code == 1);
    const Run b = run(run_onestep, kExample1, bad);
    CHECK(b.code == 1);
    CHECK(b.err.find("2") != std::string::npos);
    CHECK(run(run_onestep, kExample1).code == 1);
}

TEST_CASE("validate command") {
    const Run r = run(run_validate, kExample1);
    REQUIRE(r.code == 0);
    CHECK(field(r.out, 1, 3) <= 0.001);
    std::string np = kExample1;
    np.replace(np.find("mean_constrained"), 16, "nonparametric");
    np.replace(np.find("model.mu = 0.375\n"), 17, "");
    CHECK(run(run_validate, np).code == 0);
    const Run cf = run(run_validate, np + "derivative.mode = closed_form\n");
    REQUIRE(cf.code == 0);
    CHECK(field(cf.out, 1, 3) <= 1e-3);
    CHECK(run(run_validate, std::string(kExample1) + "derivative.mode = closed_form\n").code == 1);
    const Run rich = run(run_validate, std::string(kExample1) + "derivative.mode = richardson\n");
    REQUIRE(rich.code == 0);
    CHECK(field(rich.out, 1, 3) <= 1e-3);
    std::string tilted = kExample1;
    tilted.replace(tilted.find("mean_constrained"), 16, "tilted");
    tilted.replace(tilted.find("model.mu = 0.375"), 16, "model.basis = x0");
    CHECK(run(run_validate, tilted).code == 1);
}

TEST_CASE("demo data is reproducible") {
    const std::string a = temp_path("demo_a.csv"), b = temp_path("demo_b.csv");
    CHECK(run(make_demo_data, kExample1, {}, a).code == 0);
    CHECK(run(make_demo_data, kExample1, {}, b).code == 0);
    CHECK(slurp(a) == slurp(b));
    std::string no_seed = kExample1;
    no_seed.replace(no_seed.find("seed = 99\n"), 10, "");
    CHECK(run(make_demo_data, no_seed).code == 1);
}

TEST_CASE("example-1 one-step on demo data matches the oracle average") {
    const std::string data = temp_path("demo50.csv");
    REQUIRE(run(make_demo_data, kExample1, {}, data).code == 0);
    const Run r = run(run_onestep, kExample1, data);
    REQUIRE(r.code == 0);
    const RunConfig cfg = parse_config(kExample1);
    const DistPtr p = build_distribution(cfg);
    const OracleEif phi = (*oracle_for(cfg))(p);
    const auto rows = read_numeric_csv(data);
    double mean = 0.0;
    for (const auto& x : rows) mean += phi(x);
    mean /= rows.size();
    const double plug_in = AvgDensity().evaluate(*p);
    CHECK(field(r.out, 1, 5) == doctest::Approx(plug_in + mean).epsilon(0.01));
}

TEST_CASE("diagnose command") {
    const Run r = run(run_diagnose, kExample1);
    REQUIRE(r.code == 0);
    const std::string summary = r.out.substr(r.out.find("lambda,r_lambda"));
    CHECK(field(summary, 1, 2) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(field(summary, 2, 2) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("sibling paths") {
    CHECK(sibling_path("out/grid.csv", ".plateau.csv") == "out/grid.plateau.csv");
    CHECK(sibling_path("grid", ".plateau.csv") == "grid.plateau.csv");
}
