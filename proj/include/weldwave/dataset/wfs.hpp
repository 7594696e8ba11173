/*
 * Copyright 2026 The Weldwave Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include <json.hpp>

#include "weldwave/dataset/sample.hpp"

namespace weldwave {

namespace detail {

class ByteWriter {
public:
    template <typename T>
    void put(T v) {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                        std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
        const U u = std::bit_cast<U>(v);
        for (std::size_t b = 0; b < sizeof(T); ++b) bytes.push_back(static_cast<unsigned char>((u >> (8 * b)) & 0xffu));
    }
    void put_bytes(const void* p, std::size_t n) {
        const auto* c = static_cast<const unsigned char*>(p);
        bytes.insert(bytes.end(), c, c + n);
    }
    std::vector<unsigned char> bytes;
};

class ByteReader {
public:
    ByteReader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

    template <typename T>
    T get() {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                        std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
        need(sizeof(T));
        U u = 0;
        for (std::size_t b = 0; b < sizeof(T); ++b) u |= static_cast<U>(static_cast<U>(data_[pos_ + b]) << (8 * b));
        pos_ += sizeof(T);
        return std::bit_cast<T>(u);
    }
    std::string get_string(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }
    std::size_t position() const noexcept { return pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > size_) throw CorruptFile("file truncated at byte " + std::to_string(pos_));
    }
    const unsigned char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

inline std::uint32_t crc32_of(const unsigned char* p, std::size_t n) {
    uLong crc = crc32(0L, Z_NULL, 0);
    while (n > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
        crc = crc32(crc, p, chunk);
        p += chunk;
        n -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace detail

inline constexpr char wfs_magic[4] = {'W', 'F', 'S', '1'};

/// Serialises a record: magic, fixed header, params JSON, nine float32
/// channels, float32 stiffness label, u8 crack label, CRC32 of all prior
/// bytes. Little-endian throughout.
inline std::vector<unsigned char> encode_sample(const SampleRecord& r) {
    const std::size_t n = r.nx() * r.ny();
    for (const auto& c : r.input.channels) {
        if (c.nx() != r.nx() || c.ny() != r.ny()) throw ShapeMismatch("channel and label grids differ in shape");
    }
    if (!r.label_crack.same_shape(r.label_stiffness)) throw ShapeMismatch("label grids differ in shape");
    const std::string js = nlohmann::json{{"params", r.params}, {"metadata", r.metadata}}.dump();
    detail::ByteWriter w;
    w.bytes.reserve(64 + js.size() + n * (4 * channel_count + 5));
    w.put_bytes(wfs_magic, 4);
    w.put<std::uint32_t>(r.format_version);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(r.nx()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(r.ny()));
    w.put<double>(r.dx);
    w.put<double>(r.dy);
    w.put<double>(r.freq_hz);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(channel_count));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(r.provenance));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(js.size()));
    w.put_bytes(js.data(), js.size());
    for (const auto& c : r.input.channels) {
        for (float v : c.values()) w.put<float>(v);
    }
    for (float v : r.label_stiffness.values()) w.put<float>(v);
    for (std::uint8_t v : r.label_crack.values()) w.put<std::uint8_t>(v);
    w.put<std::uint32_t>(detail::crc32_of(w.bytes.data(), w.bytes.size()));
    return std::move(w.bytes);
}

inline SampleRecord decode_sample(const unsigned char* data, std::size_t size) {
    detail::ByteReader in(data, size);
    if (in.get_string(4) != std::string(wfs_magic, 4)) throw CorruptFile("bad magic");
    SampleRecord r;
    r.format_version = in.get<std::uint32_t>();
    if (r.format_version != wfs_format_version) {
        throw CorruptFile("format version " + std::to_string(r.format_version) + " is not supported (expected " +
                          std::to_string(wfs_format_version) + ")");
    }
    const auto nx = in.get<std::uint32_t>(), ny = in.get<std::uint32_t>();
    r.dx = in.get<double>();
    r.dy = in.get<double>();
    r.freq_hz = in.get<double>();
    const auto channels = in.get<std::uint32_t>();
    if (channels != channel_count) throw CorruptFile("expected " + std::to_string(channel_count) + " channels");
    const auto prov = in.get<std::uint8_t>();
    if (prov > static_cast<std::uint8_t>(Provenance::Generated)) throw CorruptFile("unknown provenance code");
    r.provenance = static_cast<Provenance>(prov);
    const auto json_len = in.get<std::uint32_t>();
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    const std::size_t expected = in.position() + json_len + n * (4 * channel_count + 4 + 1) + 4;
    if (size != expected) {
        throw CorruptFile("size " + std::to_string(size) + " bytes, header implies " + std::to_string(expected));
    }
    const std::uint32_t stored_crc = [&] {
        detail::ByteReader tail(data + size - 4, 4);
        return tail.get<std::uint32_t>();
    }();
    if (stored_crc != detail::crc32_of(data, size - 4)) throw CorruptFile("CRC32 mismatch");
    try {
        const auto js = nlohmann::json::parse(in.get_string(json_len));
        r.params = js.at("params").get<SampleParams>();
        r.metadata = js.at("metadata");
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("params JSON: ") + e.what());
    }
    const double x0 = 0.5 * r.dx, y0 = 0.5 * r.dy;
    for (auto& c : r.input.channels) {
        c = Grid2D<float>(nx, ny, r.dx, r.dy, x0, y0);
        for (float& v : c.values()) v = in.get<float>();
    }
    r.label_stiffness = Grid2D<float>(nx, ny, r.dx, r.dy, x0, y0);
    for (float& v : r.label_stiffness.values()) v = in.get<float>();
    r.label_crack = Grid2D<std::uint8_t>(nx, ny, r.dx, r.dy, x0, y0);
    for (std::uint8_t& v : r.label_crack.values()) {
        v = in.get<std::uint8_t>();
        if (v > 1) throw CorruptFile("crack label outside {0, 1}");
    }
    r.input.scale = r.metadata.contains("normalization") ? r.metadata["normalization"].value("scale", 0.0) : 0.0;
    return r;
}

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    const auto tmp = path.string() + ".part";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InvalidArgument("cannot write " + tmp);
        f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw InvalidArgument("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline void write_sample(const std::filesystem::path& path, const SampleRecord& r) {
    write_file_bytes(path, encode_sample(r));
}

inline SampleRecord read_sample(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return decode_sample(bytes.data(), bytes.size());
}

}  // namespace weldwave
