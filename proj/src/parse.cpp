#include "pfreq/parse.hpp"

#include <charconv>
#include <cmath>

#include "pfreq/errors.hpp"

namespace pfreq {

std::string trim(std::string_view text) {
    const auto b = text.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(b, e - b + 1));
}

namespace {

double parse_decimal(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last)
        throw ParseError("not a number: '" + std::string(s) + "'");
    return v;
}

}  // namespace

double parse_real(std::string_view text) {
    const std::string s = trim(text);
    const auto slash = s.find('/');
    double v;
    if (slash == std::string::npos) {
        v = parse_decimal(s);
    } else {
        const double num = parse_decimal(trim(std::string_view(s).substr(0, slash)));
        const double den = parse_decimal(trim(std::string_view(s).substr(slash + 1)));
        if (den == 0.0) throw ParseError("zero denominator in '" + s + "'");
        v = num / den;
    }
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + s + "'");
    return v;
}

std::vector<double> parse_real_list(std::string_view text, char sep) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find(sep, pos);
        const auto piece = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        out.push_back(parse_real(piece));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::vector<double> parse_grid(std::string_view text) {
    const auto parts = parse_real_list(text, ':');
    if (parts.size() != 3) throw ParseError("grid must look like a:b:step");
    const double a = parts[0], b = parts[1], step = parts[2];
    if (!(step > 0.0) || b < a) throw ParseError("grid needs step > 0 and a <= b");
    const double span = (b - a) / step;
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    if (count > 1000000) throw ParseError("grid too large");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(i + 1 == count && std::abs(span - (count - 1)) < 1e-9 ? b : a + double(i) * step);
    return out;
}

}  // namespace pfreq
