#include "videoqa/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "videoqa/errors.hpp"

static_assert(std::endian::native == std::endian::little, "little-endian host required");

namespace videoqa {

namespace {

constexpr char kMagic[4] = {'V', 'Q', 'A', 'C'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t read_u32(std::istream& is, const std::string& what) {
    uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 4)) throw IoError("checkpoint: truncated reading " + what);
    return v;
}

uint64_t read_u64(std::istream& is, const std::string& what) {
    uint64_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 8)) throw IoError("checkpoint: truncated reading " + what);
    return v;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write checkpoint file " + path.string());
    os.write(kMagic, 4);
    write_u32(os, kVersion);
    std::string header = ckpt.header.dump();
    write_u64(os, header.size());
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    write_u32(os, static_cast<uint32_t>(ckpt.tensors.count()));
    for (const auto& name : ckpt.tensors.names()) {
        const Tensor& t = ckpt.tensors.get(name);
        write_u32(os, static_cast<uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_u32(os, static_cast<uint32_t>(t.shape.size()));
        for (int d : t.shape) write_u32(os, static_cast<uint32_t>(d));
        os.write(reinterpret_cast<const char*>(t.data.data()),
                 static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    }
    if (!os) throw IoError("failed writing checkpoint file " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint file " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("checkpoint: bad magic in " + path.string());
    }
    uint32_t version = read_u32(is, "version");
    if (version != kVersion) {
        throw IoError("checkpoint: unsupported version " + std::to_string(version));
    }
    uint64_t header_len = read_u64(is, "header length");
    std::string header(header_len, '\0');
    if (!is.read(header.data(), static_cast<std::streamsize>(header_len))) {
        throw IoError("checkpoint: truncated header in " + path.string());
    }
    Checkpoint ckpt;
    try {
        ckpt.header = nlohmann::json::parse(header);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("checkpoint: malformed header JSON: ") + e.what());
    }
    uint32_t count = read_u32(is, "tensor count");
    for (uint32_t i = 0; i < count; ++i) {
        uint32_t name_len = read_u32(is, "tensor name length");
        std::string name(name_len, '\0');
        if (!is.read(name.data(), name_len)) throw IoError("checkpoint: truncated tensor name");
        uint32_t ndim = read_u32(is, "tensor rank");
        std::vector<int> shape(ndim);
        int64_t numel = 1;
        for (uint32_t d = 0; d < ndim; ++d) {
            shape[d] = static_cast<int>(read_u32(is, "tensor extent"));
            numel *= shape[d];
        }
        std::vector<double> data(static_cast<size_t>(numel));
        if (!is.read(reinterpret_cast<char*>(data.data()),
                     static_cast<std::streamsize>(data.size() * sizeof(double)))) {
            throw IoError("checkpoint: truncated tensor data for '" + name + "'");
        }
        ckpt.tensors.add(name, Tensor(std::move(shape), std::move(data)));
    }
    return ckpt;
}

uint64_t fnv1a(const void* data, size_t len, uint64_t seed) {
    uint64_t h = seed;
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t hash_params(const ParamStore& params) {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& name : params.names()) {
        h = fnv1a(name.data(), name.size(), h);
        const Tensor& t = params.get(name);
        h = fnv1a(t.shape.data(), t.shape.size() * sizeof(int), h);
        h = fnv1a(t.data.data(), t.data.size() * sizeof(double), h);
    }
    return h;
}

}  // namespace videoqa
