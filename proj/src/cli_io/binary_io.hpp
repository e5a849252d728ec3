#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "nudgelab/core.hpp"

namespace nudge::binio {

template <class T>
T to_le(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <class T>
void put(std::ostream& out, T v) {
    v = to_le(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw FormatError(std::string("truncated file while reading ") + what);
    return to_le(v);
}

inline void put_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
    char m[4] = {};
    if (!in.read(m, 4) || std::memcmp(m, magic, 4) != 0) throw FormatError(std::string("missing magic ") + magic);
}

inline void expect_version(std::istream& in, std::uint32_t supported) {
    const auto v = get<std::uint32_t>(in, "version");
    if (v == 0 || v > supported)
        throw FormatError("unsupported format version " + std::to_string(v) + " (this build reads up to " +
                          std::to_string(supported) + ")");
}

inline void expect_end(std::istream& in) {
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after payload");
}

}  // namespace nudge::binio
