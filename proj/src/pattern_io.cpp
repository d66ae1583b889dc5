#include "ltl/pattern_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ltl {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ParseError("pattern line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_pattern(std::ostream& os, const BinaryConfig& a) {
    const int D = a.domain.dim;
    os << "dims " << D << "\n";
    os << "epsilon " << format_double(a.domain.epsilon) << "\n";
    os << "origin";
    for (long o : a.origin) os << ' ' << o;
    os << "\norder row-major\nextent";
    for (long e : a.domain.extent) os << ' ' << e;
    os << "\n";
    const long row_len = a.domain.extent[static_cast<std::size_t>(D - 1)];
    const long plane_rows =
        D >= 2 ? a.domain.extent[static_cast<std::size_t>(D - 2)] : 1;
    long row = 0;
    std::string line;
    line.reserve(static_cast<std::size_t>(row_len));
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        line.push_back(a.cells[i] ? '1' : '0');
        if (static_cast<long>(line.size()) == row_len) {
            os << line << "\n";
            line.clear();
            ++row;
            if (D >= 3 && row % plane_rows == 0 && i + 1 < a.cells.size()) os << "\n";
        }
    }
}

void write_pattern_file(const std::string& path, const BinaryConfig& a) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_pattern(os, a);
    if (!os) throw std::runtime_error("write failed: " + path);
}

BinaryConfig read_pattern(std::istream& is) {
    int dims = 0;
    double epsilon = 0.0;
    std::vector<long> origin, extent;
    bool have_dims = false, have_eps = false, have_origin = false, have_extent = false;

    std::string raw;
    int lineno = 0;
    // Header: key/value lines until "extent".
    while (std::getline(is, raw)) {
        ++lineno;
        if (raw.empty() || raw[0] == '#') continue;
        std::istringstream ls(raw);
        std::string key;
        ls >> key;
        if (key == "dims") {
            if (!(ls >> dims) || dims < 1) fail(lineno, "bad dims");
            have_dims = true;
        } else if (key == "epsilon") {
            if (!(ls >> epsilon) || !(epsilon > 0.0)) fail(lineno, "bad epsilon");
            have_eps = true;
        } else if (key == "origin") {
            long v;
            while (ls >> v) origin.push_back(v);
            have_origin = true;
        } else if (key == "order") {
            std::string o;
            ls >> o;
            if (o != "row-major") fail(lineno, "unsupported order: " + o);
        } else if (key == "extent") {
            long v;
            while (ls >> v) extent.push_back(v);
            have_extent = true;
            break;
        } else {
            fail(lineno, "unknown header field: " + key);
        }
    }
    if (!have_dims) fail(lineno, "missing dims");
    if (!have_eps) fail(lineno, "missing epsilon");
    if (!have_origin) fail(lineno, "missing origin");
    if (!have_extent) fail(lineno, "missing extent");
    auto ud = static_cast<std::size_t>(dims);
    if (origin.size() != ud) fail(lineno, "origin needs one entry per axis");
    if (extent.size() != ud) fail(lineno, "extent needs one entry per axis");
    for (long e : extent)
        if (e < 1) fail(lineno, "extents must be >= 1");

    BinaryConfig a{Domain::growable(dims, epsilon, extent), origin, {}};
    const std::size_t total = a.box().cell_count();
    a.cells.reserve(total);
    const long row_len = extent[ud - 1];
    while (std::getline(is, raw)) {
        ++lineno;
        if (raw.empty() || raw[0] == '#') continue;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (static_cast<long>(raw.size()) != row_len)
            fail(lineno, "row has " + std::to_string(raw.size()) + " cells, expected " +
                             std::to_string(row_len));
        for (char c : raw) {
            if (c != '0' && c != '1') fail(lineno, std::string("bad cell character '") + c + "'");
            a.cells.push_back(c == '1' ? 1 : 0);
        }
        if (a.cells.size() > total) fail(lineno, "more rows than the extent allows");
    }
    if (a.cells.size() != total)
        throw ParseError("pattern: got " + std::to_string(a.cells.size()) + " cells, expected " +
                         std::to_string(total));
    return a;
}

BinaryConfig read_pattern_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open pattern file: " + path);
    return read_pattern(is);
}

void write_pgm(std::ostream& os, const BinaryConfig& a, int scale) {
    if (a.domain.dim != 2) throw UnsupportedError("PGM rendering needs a 2-D configuration");
    if (scale < 1) throw InvalidArgumentError("PGM scale must be >= 1");
    const long nx = a.domain.extent[0], ny = a.domain.extent[1];
    const long w = nx * scale, h = ny * scale;
    os << "P5\n" << w << " " << h << "\n255\n";
    std::vector<char> row(static_cast<std::size_t>(w));
    Coord z(2);
    for (long py = 0; py < h; ++py) {
        z[1] = a.origin[1] + (ny - 1 - py / scale);  // top image row = highest y
        for (long px = 0; px < w; ++px) {
            z[0] = a.origin[0] + px / scale;
            row[static_cast<std::size_t>(px)] = a.at(z) ? '\x00' : '\xff';
        }
        os.write(row.data(), w);
    }
}

void write_pgm_file(const std::string& path, const BinaryConfig& a, int scale) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_pgm(os, a, scale);
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace ltl
