#include "lagrmc/io.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "lagrmc/errors.hpp"

namespace lagrmc::io {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

    // Unique temp name in the same directory so rename stays atomic.
    static std::atomic<unsigned> counter{0};
    const fs::path tmp =
        dir / (path.filename().string() + ".tmp" + std::to_string(counter.fetch_add(1)) + "-" +
               std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw IoError("short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string() + ": " + ec.message());
    }
}

namespace {

void append_row_vec(std::string& s, const double* v, int d) {
    for (int j = 0; j < d; ++j) {
        s += ',';
        s += format_double(v[j]);
    }
}

} // namespace

std::string events_csv(const EventLog& log) {
    const int d = log.d;
    std::string s = "t,id";
    for (int j = 0; j < d; ++j) s += ",hit_" + std::to_string(j);
    for (int j = 0; j < d; ++j) s += ",u_minus_" + std::to_string(j);
    for (int j = 0; j < d; ++j) s += ",u_plus_" + std::to_string(j);
    s += '\n';
    for (std::size_t row = 0; row < log.size(); ++row) {
        s += format_double(log.t[row]);
        s += ',';
        s += std::to_string(log.id[row]);
        append_row_vec(s, log.hit.data() + row * d, d);
        append_row_vec(s, log.u_minus.data() + row * d, d);
        append_row_vec(s, log.u_plus.data() + row * d, d);
        s += '\n';
    }
    return s;
}

std::string checkpoint_csv(const Checkpoint& cp, int d) {
    std::string s = "id";
    for (int j = 0; j < d; ++j) s += ",x_" + std::to_string(j);
    for (int j = 0; j < d; ++j) s += ",u_" + std::to_string(j);
    for (int j = 0; j < d; ++j) s += ",k_" + std::to_string(j);
    s += ",jumps\n";
    const std::size_t n = cp.jumps.size();
    for (std::size_t i = 0; i < n; ++i) {
        s += std::to_string(i);
        append_row_vec(s, cp.x.data() + i * d, d);
        append_row_vec(s, cp.u.data() + i * d, d);
        append_row_vec(s, cp.k.data() + i * d, d);
        s += ',';
        s += std::to_string(cp.jumps[i]);
        s += '\n';
    }
    return s;
}

std::string checkpoint_filename(double t) { return format_double(t) + ".csv"; }

} // namespace lagrmc::io
