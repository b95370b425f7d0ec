#pragma once

// "tensor-text v1": a header line `TT1 <h> <w> <k>` (prototype stack) or
// `TT1 <n> <k>` (coefficient matrix) followed by whitespace-separated reals
// in row-major order.

#include "cobb/error.hpp"
#include "cobb/mask_assembly.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cobb::tensor_text {

struct Parsed {
    std::vector<long> dims;
    std::vector<double> values;
};

inline Parsed parse(std::string_view text)
{
    const auto eol = text.find('\n');
    std::istringstream header(std::string(text.substr(0, eol)));
    std::string magic;
    header >> magic;
    if (magic != "TT1") {
        throw FormatError("tensor-text: missing TT1 header");
    }
    Parsed out;
    std::string tok;
    while (header >> tok) {
        long d = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || d < 0) {
            throw FormatError("tensor-text: bad dimension '" + tok + "'");
        }
        out.dims.push_back(d);
    }
    if (out.dims.size() != 2 && out.dims.size() != 3) {
        throw FormatError("tensor-text: expected 2 or 3 dimensions, got " + std::to_string(out.dims.size()));
    }
    std::size_t expected = 1;
    for (long d : out.dims) {
        expected *= static_cast<std::size_t>(d);
    }
    if (eol != std::string_view::npos) {
        std::istringstream body(std::string(text.substr(eol + 1)));
        while (body >> tok) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw FormatError("tensor-text: bad value '" + tok + "'");
            }
            out.values.push_back(v);
        }
    }
    if (out.values.size() != expected) {
        throw FormatError("tensor-text: header declares " + std::to_string(expected) + " values, found " +
                          std::to_string(out.values.size()));
    }
    return out;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline PrototypeStack parse_prototypes(std::string_view text)
{
    Parsed p = parse(text);
    if (p.dims.size() != 3) {
        throw FormatError("tensor-text: prototype stack needs `TT1 <h> <w> <k>`");
    }
    return PrototypeStack(static_cast<int>(p.dims[0]), static_cast<int>(p.dims[1]), static_cast<int>(p.dims[2]),
                          std::move(p.values));
}

inline CoeffMatrix parse_coefficients(std::string_view text)
{
    Parsed p = parse(text);
    if (p.dims.size() != 2) {
        throw FormatError("tensor-text: coefficient matrix needs `TT1 <n> <k>`");
    }
    return CoeffMatrix(static_cast<int>(p.dims[0]), static_cast<int>(p.dims[1]), std::move(p.values));
}

namespace detail {
inline void write_values(std::ostream& os, const std::vector<double>& values, std::size_t perLine)
{
    os << std::setprecision(17);
    for (std::size_t i = 0; i < values.size(); ++i) {
        os << values[i] << ((i + 1) % perLine == 0 || i + 1 == values.size() ? '\n' : ' ');
    }
}
} // namespace detail

inline std::string format(const PrototypeStack& p)
{
    std::ostringstream os;
    os << "TT1 " << p.height << ' ' << p.width << ' ' << p.k << '\n';
    detail::write_values(os, p.values, static_cast<std::size_t>(p.k));
    return os.str();
}

inline std::string format(const CoeffMatrix& c)
{
    std::ostringstream os;
    os << "TT1 " << c.n << ' ' << c.k << '\n';
    detail::write_values(os, c.values, static_cast<std::size_t>(c.k));
    return os.str();
}

} // namespace cobb::tensor_text
