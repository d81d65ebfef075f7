#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "raddiff_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir.parent_path());
    return dir;
}

fs::path write_config(const std::string& name, const json& doc) {
    const fs::path dir = fs::temp_directory_path() / "raddiff_cli_tests";
    fs::create_directories(dir);
    const fs::path p = dir / (name + ".json");
    std::ofstream(p) << doc.dump();
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
    return out;
}

json small_run() {
    return {{"grid", {{"dim", 2}, {"N", 16}}}, {"run", {{"t_end", 0.5}, {"sample_interval", 0.25}}},
            {"init", {{"profile", "random_band"}}}};
}

}  // namespace

TEST(Cli, SymbolAtZero) {
    const auto cfg = write_config("empty", json::object());
    const auto out = fresh_dir("symbol");
    ASSERT_EQ(raddiff::cli::execute("symbol", cfg, out, std::nullopt), 0);
    for (const char* f : {"eigenvalues.csv", "hurwitz.csv", "symbol.json", "resolved_config.json", "manifest.json"})
        EXPECT_TRUE(fs::exists(out / f)) << f;
    std::ifstream in(out / "eigenvalues.csv");
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    const auto cells = split(first);
    ASSERT_GE(cells.size(), 9u);
    EXPECT_EQ(std::stod(cells[0]), 0.0);
    std::vector<double> re{std::stod(cells[1]), std::stod(cells[3]), std::stod(cells[5]), std::stod(cells[7])};
    std::sort(re.begin(), re.end());
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(re[i], 0.0, 1e-9);
    EXPECT_NEAR(re[3], 11.0 / 3.0, 1e-9);
    const auto manifest = json::parse(slurp(out / "manifest.json"));
    EXPECT_EQ(manifest.at("exit_code"), 0);
    EXPECT_EQ(manifest.at("command"), "symbol");
    EXPECT_EQ(manifest.at("config_hash").get<std::string>().rfind("fnv1a64:", 0), 0u);
}

TEST(Cli, MissingConfigWritesNothing) {
    const auto out = fresh_dir("missing");
    EXPECT_EQ(raddiff::cli::execute("symbol", out.parent_path() / "does_not_exist.json", out, std::nullopt), 1);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, StrictParsing) {
    const auto out = fresh_dir("strict");
    EXPECT_EQ(raddiff::cli::execute("symbol", write_config("unknown_key", {{"params", {{"mu", 1.0}, {"nu", 2.0}}}}), out,
                                    std::nullopt),
              1);
    EXPECT_EQ(raddiff::cli::execute("symbol", write_config("unknown_section", {{"plot", json::object()}}), out,
                                    std::nullopt),
              1);
    EXPECT_EQ(raddiff::cli::execute("symbol", write_config("wrong_type", {{"grid", {{"N", "64"}}}}), out, std::nullopt),
              1);
    EXPECT_EQ(raddiff::cli::execute("symbol", write_config("bad_grid", {{"grid", {{"N", 48}}}}), out, std::nullopt), 1);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, UnknownCommand) {
    const auto out = fresh_dir("unknown_command");
    EXPECT_EQ(raddiff::cli::execute("plot", write_config("empty", json::object()), out, std::nullopt), 1);
}

TEST(Cli, DeterministicOutputs) {
    const auto cfg = write_config("small_run", small_run());
    const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
    ASSERT_EQ(raddiff::cli::execute("simulate", cfg, a, 5), 0);
    ASSERT_EQ(raddiff::cli::execute("simulate", cfg, b, 5), 0);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        if (name == "manifest.json") continue;
        EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
        ++compared;
    }
    EXPECT_EQ(compared, 4);
    const auto ma = json::parse(slurp(a / "manifest.json")), mb = json::parse(slurp(b / "manifest.json"));
    EXPECT_EQ(ma.at("config_hash"), mb.at("config_hash"));
    EXPECT_EQ(ma.at("seed"), 5);

    const auto c = fresh_dir("det_c");
    ASSERT_EQ(raddiff::cli::execute("simulate", cfg, c, 6), 0);
    EXPECT_NE(slurp(a / "initial.snap"), slurp(c / "initial.snap"));
}

TEST(Cli, SimulateTrajectoryShape) {
    const auto out = fresh_dir("trajectory");
    ASSERT_EQ(raddiff::cli::execute("simulate", write_config("small_run", small_run()), out, std::nullopt), 0);
    std::ifstream in(out / "trajectory.csv");
    std::string line;
    int rows = 0;
    std::getline(in, line);
    const auto width = split(line).size();
    while (std::getline(in, line)) {
        EXPECT_EQ(split(line).size(), width);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

TEST(Cli, LpAndEnergyOutputs) {
    const auto cfg = write_config("lp", {{"grid", {{"dim", 2}, {"N", 32}, {"L_box", 1.5707963267948966}}}});
    const auto lp = fresh_dir("lp"), energy = fresh_dir("energy");
    EXPECT_EQ(raddiff::cli::execute("lp", cfg, lp, std::nullopt), 0);
    EXPECT_TRUE(fs::exists(lp / "shells.csv"));
    EXPECT_TRUE(fs::exists(lp / "lp.json"));
    EXPECT_EQ(raddiff::cli::execute("energy", cfg, energy, std::nullopt), 0);
    EXPECT_TRUE(fs::exists(energy / "high_freq.csv"));
    EXPECT_TRUE(fs::exists(energy / "low_freq.csv"));
}

TEST(Cli, VerifyRatesDefaults) {
    const auto out = fresh_dir("rates");
    const int code = raddiff::cli::execute("verify-rates", write_config("empty", json::object()), out, std::nullopt);
    ASSERT_TRUE(fs::exists(out / "rates.json"));
    const auto doc = json::parse(slurp(out / "rates.json"));
    bool all = true;
    for (const auto& r : doc.at("reports")) {
        const auto q = r.at("quantity").get<std::string>();
        all = all && r.at("pass").get<bool>();
        if (q == "grad0_U" || q == "grad1_U" || q == "grad2_U") EXPECT_TRUE(r.at("pass").get<bool>()) << q;
    }
    EXPECT_EQ(doc.at("all_pass").get<bool>(), all);
    EXPECT_EQ(code, all ? 0 : 2);
}

TEST(Cli, MainParsesArguments) {
    const auto cfg = write_config("empty", json::object());
    const auto out = fresh_dir("main");
    std::string prog = "raddiff", cmd = "symbol", c = "--config", cp = cfg.string(), o = "--out", op = out.string();
    char* argv[] = {prog.data(), cmd.data(), c.data(), cp.data(), o.data(), op.data()};
    EXPECT_EQ(raddiff::cli::main(6, argv), 0);
    char* bad[] = {prog.data(), cmd.data(), c.data(), cp.data()};
    EXPECT_EQ(raddiff::cli::main(4, bad), 1);
}
