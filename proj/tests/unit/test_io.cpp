#include "doctest.h"

#include "lagrmc/errors.hpp"
#include "lagrmc/io.hpp"
#include "lagrmc/rng.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace lagrmc;
namespace fs = std::filesystem;

namespace {
double reparse(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    REQUIRE(r.ec == std::errc());
    REQUIRE(r.ptr == s.data() + s.size());
    return v;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
} // namespace

TEST_CASE("shortest round-trip formatting") {
    CHECK(io::format_double(0.0) == "0");
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(-2.5) == "-2.5");
    // Round-trips exactly, including values with no short decimal form.
    RngStream g(1, 0);
    for (int i = 0; i < 2000; ++i) {
        double z0, z1;
        g.normal_pair(z0, z1);
        const double v = z0 * std::pow(10.0, std::floor(z1 * 30.0));
        CHECK(reparse(io::format_double(v)) == v);
    }
    CHECK(reparse(io::format_double(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK(reparse(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("atomic write") {
    const fs::path dir = fs::temp_directory_path() / "lagrmc_io_test";
    fs::remove_all(dir);
    const fs::path target = dir / "sub" / "file.txt";
    io::atomic_write(target, "hello\n");
    CHECK(slurp(target) == "hello\n");
    // Overwrite in place.
    io::atomic_write(target, "replaced");
    CHECK(slurp(target) == "replaced");
    // No temp litter left behind.
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(target.parent_path()))
        ++entries;
    CHECK(entries == 1);
    fs::remove_all(dir);
    // Unwritable destinations surface as IoError.
    CHECK_THROWS_AS(io::atomic_write("/proc/definitely/not/writable/x.txt", "x"),
                    IoError);
}

TEST_CASE("events csv layout") {
    EventLog log;
    log.d = 2;
    const double hit[] = {1.0, 0.0};
    const double um[] = {2.0, 0.5};
    const double up[] = {-2.0, 0.5};
    log.append(0.5, 3, hit, um, up);
    const std::string csv = io::events_csv(log);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,id,hit_0,hit_1,u_minus_0,u_minus_1,u_plus_0,u_plus_1");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0.5,3,1,0,2,0.5,-2,0.5");
    CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("checkpoint csv layout and filename") {
    Checkpoint cp;
    cp.t = 0.25;
    cp.step_index = 5;
    cp.x = {0.1, 0.2, 0.3, 0.4};
    cp.u = {1.0, -1.0, 0.5, 0.25};
    cp.k = {0.0, 0.0, -2.0, 0.0};
    cp.jumps = {0, 1};
    const std::string csv = io::checkpoint_csv(cp, 2);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "id,x_0,x_1,u_0,u_1,k_0,k_1,jumps");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0,0.1,0.2,1,-1,0,0,0");
    REQUIRE(std::getline(in, line));
    CHECK(line == "1,0.3,0.4,0.5,0.25,-2,0,1");

    CHECK(io::checkpoint_filename(0.25) == "0.25.csv");
    CHECK(io::checkpoint_filename(1.0) == "1.csv");
}
