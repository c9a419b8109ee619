#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgr/nn/model.hpp"
#include "cgr/rng.hpp"
#include "cgr/vocab.hpp"

namespace cgr::train {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; big-endian hosts unsupported");

struct CorruptCheckpoint : std::runtime_error {
    explicit CorruptCheckpoint(const std::string& what) : std::runtime_error(what) {}
};
struct VersionError : std::runtime_error {
    explicit VersionError(uint32_t got, uint32_t want)
        : std::runtime_error("checkpoint version " + std::to_string(got) + ", expected " +
                             std::to_string(want)) {}
};

inline constexpr uint32_t kCheckpointVersion = 1;

namespace detail {

template <typename I>
void put(std::string& buf, I v) {
    char tmp[sizeof(I)];
    std::memcpy(tmp, &v, sizeof(I));
    buf.append(tmp, sizeof(I));
}

template <typename I>
I take(const std::string& buf, size_t& off) {
    if (off + sizeof(I) > buf.size()) throw CorruptCheckpoint("truncated checkpoint");
    I v;
    std::memcpy(&v, buf.data() + off, sizeof(I));
    off += sizeof(I);
    return v;
}

inline std::string take_bytes(const std::string& buf, size_t& off, size_t n) {
    if (off + n > buf.size()) throw CorruptCheckpoint("truncated checkpoint");
    std::string s = buf.substr(off, n);
    off += n;
    return s;
}

}  // namespace detail

// Binary layout (all integers little-endian):
//   "CGRG" | u32 version | u64 header_len | header JSON (config + vocab)
//   u64 n_params | records (u64 name_len, name, u8 dtype, u32 ndims,
//   i32 dims..., payload) | u64 FNV-1a digest of all payload bytes
template <typename T>
void save_checkpoint(const nn::Model<T>& model, const Vocabulary& vocab,
                     const std::string& path) {
    std::string buf;
    buf += "CGRG";
    detail::put<uint32_t>(buf, kCheckpointVersion);
    nlohmann::json header = {{"config", model.config.to_json()}, {"vocab", vocab.tokens()}};
    std::string hs = header.dump();
    detail::put<uint64_t>(buf, hs.size());
    buf += hs;
    detail::put<uint64_t>(buf, model.params.count());
    uint64_t digest = 0xCBF29CE484222325ull;
    for (size_t i = 0; i < model.params.count(); ++i) {
        const std::string& name = model.params.names()[i];
        const auto& t = model.params.at(i);
        detail::put<uint64_t>(buf, name.size());
        buf += name;
        buf.push_back(static_cast<char>(sizeof(T)));
        detail::put<uint32_t>(buf, static_cast<uint32_t>(t.shape().size()));
        for (int d : t.shape()) detail::put<int32_t>(buf, d);
        size_t bytes = t.size() * sizeof(T);
        size_t start = buf.size();
        buf.resize(buf.size() + bytes);
        std::memcpy(buf.data() + start, t.value().data(), bytes);
        digest = fnv1a64(buf.data() + start, bytes, digest);
    }
    detail::put<uint64_t>(buf, digest);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

template <typename T>
std::pair<nn::Model<T>, Vocabulary> load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    size_t off = 0;
    if (detail::take_bytes(buf, off, 4) != "CGRG") throw CorruptCheckpoint("bad magic");
    uint32_t version = detail::take<uint32_t>(buf, off);
    if (version != kCheckpointVersion) throw VersionError(version, kCheckpointVersion);
    uint64_t hlen = detail::take<uint64_t>(buf, off);
    nlohmann::json header = nlohmann::json::parse(detail::take_bytes(buf, off, hlen));
    nn::ModelConfig config = nn::ModelConfig::from_json(header.at("config"));
    Vocabulary vocab = Vocabulary::from_tokens(header.at("vocab").get<std::vector<std::string>>());

    nn::Model<T> model = nn::build_model<T>(config);
    uint64_t n = detail::take<uint64_t>(buf, off);
    if (n != model.params.count()) throw CorruptCheckpoint("parameter count mismatch");
    uint64_t digest = 0xCBF29CE484222325ull;
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t nlen = detail::take<uint64_t>(buf, off);
        std::string name = detail::take_bytes(buf, off, nlen);
        if (name != model.params.names()[i])
            throw CorruptCheckpoint("parameter order mismatch at " + name);
        uint8_t dtype = static_cast<uint8_t>(detail::take<char>(buf, off));
        if (dtype != sizeof(T)) throw CorruptCheckpoint("dtype mismatch for " + name);
        uint32_t ndims = detail::take<uint32_t>(buf, off);
        ad::Shape shape;
        for (uint32_t d = 0; d < ndims; ++d) shape.push_back(detail::take<int32_t>(buf, off));
        auto& t = model.params.at(i);
        if (shape != t.shape()) throw CorruptCheckpoint("shape mismatch for " + name);
        size_t bytes = t.size() * sizeof(T);
        std::string payload = detail::take_bytes(buf, off, bytes);
        digest = fnv1a64(payload.data(), bytes, digest);
        std::memcpy(t.value().data(), payload.data(), bytes);
    }
    uint64_t stored = detail::take<uint64_t>(buf, off);
    if (stored != digest) throw CorruptCheckpoint("digest mismatch");
    return {std::move(model), std::move(vocab)};
}

}  // namespace cgr::train
