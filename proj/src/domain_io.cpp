#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "pfreq/errors.hpp"
#include "pfreq/geometry.hpp"
#include "pfreq/parse.hpp"

namespace pfreq {

// Format:
//   h <real>
//   nx <int>
//   ny <int>
//   origin <x> <y>
//   convex 0|1
//   ny rows of nx characters '0'/'1', top row (largest y) first.
// Blank lines and lines starting with '#' are skipped in the header.
DomainPtr read_domain(std::istream& in) {
    std::map<std::string, std::vector<std::string>> header;
    const char* keys[] = {"h", "nx", "ny", "origin", "convex"};
    std::string line;
    while (header.size() < 5) {
        if (!std::getline(in, line)) throw ParseError("domain file: truncated header");
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ls(t);
        std::string key;
        ls >> key;
        bool known = false;
        for (const char* k : keys) known = known || key == k;
        if (!known) throw ParseError("domain file: unknown header key '" + key + "'");
        if (header.count(key)) throw ParseError("domain file: duplicate header key '" + key + "'");
        std::vector<std::string> vals;
        for (std::string v; ls >> v;) vals.push_back(v);
        const std::size_t want = key == "origin" ? 2 : 1;
        if (vals.size() != want) throw ParseError("domain file: wrong value count for '" + key + "'");
        header[key] = vals;
    }
    const double h = parse_real(header["h"][0]);
    const double nxr = parse_real(header["nx"][0]);
    const double nyr = parse_real(header["ny"][0]);
    if (nxr != std::floor(nxr) || nyr != std::floor(nyr) || nxr < 3 || nyr < 3 || nxr > 1e5 || nyr > 1e5)
        throw ParseError("domain file: nx and ny must be integers in [3, 1e5]");
    const int nx = static_cast<int>(nxr), ny = static_cast<int>(nyr);
    const Vec2 origin{parse_real(header["origin"][0]), parse_real(header["origin"][1])};
    const std::string cv = header["convex"][0];
    if (cv != "0" && cv != "1") throw ParseError("domain file: convex must be 0 or 1");
    if (!(h > 0)) throw ParseError("domain file: h must be positive");

    std::vector<std::uint8_t> mask(std::size_t(nx) * ny, 0);
    int row = 0;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (row >= ny) throw ParseError("domain file: more than ny mask rows");
        if (int(t.size()) != nx)
            throw ParseError("domain file: row " + std::to_string(row + 1) + " has " + std::to_string(t.size()) +
                             " characters, expected " + std::to_string(nx));
        const int j = ny - 1 - row;
        for (int i = 0; i < nx; ++i) {
            if (t[i] != '0' && t[i] != '1')
                throw ParseError("domain file: mask characters must be 0 or 1");
            mask[std::size_t(j) * nx + i] = t[i] == '1';
        }
        ++row;
    }
    if (row != ny)
        throw ParseError("domain file: expected " + std::to_string(ny) + " mask rows, got " + std::to_string(row));
    try {
        return build_from_mask(h, origin, nx, ny, std::move(mask), cv == "1");
    } catch (const DomainError& e) {
        throw ParseError(std::string("domain file: ") + e.what());
    }
}

DomainPtr load_domain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open domain file '" + path + "'");
    return read_domain(in);
}

void write_domain(std::ostream& out, const GridDomain& dom) {
    std::ostringstream s;
    s.precision(17);
    s << "h " << dom.h() << "\n";
    s << "nx " << dom.nx() << "\n";
    s << "ny " << dom.ny() << "\n";
    s << "origin " << dom.origin().x << " " << dom.origin().y << "\n";
    s << "convex " << (dom.convex() ? 1 : 0) << "\n";
    for (int j = dom.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < dom.nx(); ++i) s << (dom.interior(i, j) ? '1' : '0');
        s << "\n";
    }
    out << s.str();
}

namespace {

std::map<std::string, double> parse_keyvals(const std::string& body) {
    std::map<std::string, double> kv;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const auto next = body.find(',', pos);
        const std::string item = trim(body.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("shape literal: expected key=value, got '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        if (kv.count(key)) throw ParseError("shape literal: duplicate key '" + key + "'");
        kv[key] = parse_real(item.substr(eq + 1));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("shape literal: missing '" + key + "'");
    const double v = it->second;
    kv.erase(it);
    return v;
}

}  // namespace

DomainPtr parse_domain_spec(const std::string& spec, double h) {
    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? std::string() : spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    try {
        if (kind == "disk") {
            auto kv = parse_keyvals(body);
            const double r = take(kv, "r");
            if (!kv.empty()) throw ParseError("shape literal: unexpected key '" + kv.begin()->first + "'");
            return build_disk(r, h);
        }
        if (kind == "rect") {
            auto kv = parse_keyvals(body);
            const double w = take(kv, "w");
            const double ht = take(kv, "h");
            if (!kv.empty()) throw ParseError("shape literal: unexpected key '" + kv.begin()->first + "'");
            return build_rectangle(w, ht, h);
        }
        if (kind == "poly") {
            std::vector<Vec2> pts;
            std::size_t pos = 0;
            while (pos <= body.size()) {
                const auto next = body.find(';', pos);
                const auto xy = parse_real_list(body.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
                if (xy.size() != 2) throw ParseError("shape literal: polygon vertices need two coordinates");
                pts.push_back({xy[0], xy[1]});
                if (next == std::string::npos) break;
                pos = next + 1;
            }
            return build_polygon(pts, h);
        }
    } catch (const DomainError& e) {
        throw ParseError(std::string("shape literal '") + spec + "': " + e.what());
    }
    const std::string path = kind == "file" ? body : spec;
    return load_domain_file(path);
}

}  // namespace pfreq
