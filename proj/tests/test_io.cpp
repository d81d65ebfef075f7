#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "raddiff/error.hpp"
#include "raddiff/io.hpp"
#include "support.hpp"

using namespace raddiff;
using namespace raddiff::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "raddiff_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Format, SeventeenSignificantDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
    for (double x : {M_PI, -2.5e-300, 6.02214076e23, -1e-17}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Csv, HeaderRowsAndLineEndings) {
    const auto path = scratch("table.csv");
    write_csv(path, {"a", "b"}, {{1.0, 0.5}, {2.0, -3.0}});
    EXPECT_EQ(slurp(path), "a,b\n1,0.5\n2,-3\n");
}

TEST(Snapshot, RoundTripIsBitExact) {
    for (int dim : {1, 2, 3}) {
        auto g = std::make_shared<const Grid>(dim, 8, 3.0);
        const auto s = random_state(g, 2, 0.01, 4);
        const auto path = scratch("state" + std::to_string(dim) + ".snap");
        write_snapshot(path, s, 1.25);
        const auto back = read_snapshot(path);
        EXPECT_EQ(back.t, 1.25);
        EXPECT_EQ(back.state.dim(), dim);
        EXPECT_EQ(back.state.grid().n(), 8);
        EXPECT_EQ(back.state.grid().box_length(), 3.0);
        for (std::size_t c = 0; c < s.n_components(); ++c) {
            const auto a = s.values(c), b = back.state.values(c);
            EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << c;
        }
    }
}

TEST(Snapshot, HeaderIsJsonLine) {
    auto g = std::make_shared<const Grid>(2, 4, 1.0);
    const auto path = scratch("header.snap");
    write_snapshot(path, StateField(g), 0.0);
    const auto text = slurp(path);
    const auto eol = text.find('\n');
    ASSERT_NE(eol, std::string::npos);
    EXPECT_EQ(text.size() - eol - 1, 5u * 16u * sizeof(double));
    EXPECT_NE(text.substr(0, eol).find("\"dtype\""), std::string::npos);
}

TEST(Snapshot, TruncatedPayloadRejected) {
    auto g = std::make_shared<const Grid>(1, 8, 1.0);
    const auto path = scratch("short.snap");
    write_snapshot(path, StateField(g), 0.0);
    const auto text = slurp(path);
    write_text(path, text.substr(0, text.size() - 8));
    EXPECT_THROW(read_snapshot(path), Error);
}

TEST(Hash, Fnv1a64KnownValues) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}
