#include "lelab/field_io.hpp"

#include <bit>
#include <fstream>
#include <iomanip>
#include <vector>

#include <json.hpp>
#include <zlib.h>

namespace lelab {

static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");

std::uint32_t crc32_bytes(const void* data, std::size_t len) {
    uLong crc = crc32(0L, Z_NULL, 0);
    const auto* p = static_cast<const Bytef*>(data);
    while (len > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(len, 1u << 30));
        crc = crc32(crc, p, chunk);
        p += chunk;
        len -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t crc32_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return crc32_bytes(buf.data(), buf.size());
}

namespace {

std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
    return std::filesystem::path(stem.string() + ext);
}

}  // namespace

std::filesystem::path write_field(const std::filesystem::path& stem, const ScalarField& f,
                                  const ProblemParams& p) {
    const DiscGrid& g = *f.grid;
    const auto bin = with_ext(stem, ".f64");
    {
        std::ofstream out(bin, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + bin.string());
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    }
    nlohmann::ordered_json meta;
    meta["n"] = g.n;
    meta["h"] = g.h;
    meta["shape"] = to_string(g.shape);
    meta["k"] = g.k;
    meta["x_min"] = g.x_min;
    meta["y_min"] = g.y_min;
    meta["params"] = {{"q", p.q},
                      {"lambda_plus", p.lambda_plus},
                      {"lambda_minus", p.lambda_minus},
                      {"epsilon", p.epsilon},
                      {"mu", p.mu}};
    meta["checksum"] = crc32_bytes(f.values.data(), f.values.size() * sizeof(double));
    std::ofstream js(with_ext(stem, ".json"));
    js << std::setw(2) << meta << '\n';
    return bin;
}

LoadedField read_field(const std::filesystem::path& stem) {
    std::ifstream js(with_ext(stem, ".json"));
    if (!js) throw std::runtime_error("cannot open " + with_ext(stem, ".json").string());
    const auto meta = nlohmann::json::parse(js);
    const int n = meta.at("n").get<int>();
    const std::string shape = meta.at("shape").get<std::string>();
    GridPtr g;
    if (shape == "disc") {
        g = build_disc(n);
    } else if (shape == "sector") {
        g = build_sector(n, meta.at("k").get<int>());
    } else {
        g = build_square(n, meta.at("x_min").get<double>(), meta.at("y_min").get<double>(),
                         meta.at("h").get<double>());
    }
    std::vector<double> v(g->size());
    std::ifstream in(with_ext(stem, ".f64"), std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + with_ext(stem, ".f64").string());
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double))) {
        throw std::runtime_error("field dump truncated: " + stem.string());
    }
    if (crc32_bytes(v.data(), v.size() * sizeof(double)) != meta.at("checksum").get<std::uint32_t>()) {
        throw std::runtime_error("field dump checksum mismatch: " + stem.string());
    }
    const auto& pj = meta.at("params");
    ProblemParams p(pj.at("q").get<double>(), pj.at("lambda_plus").get<double>(),
                    pj.at("lambda_minus").get<double>(), pj.at("epsilon").get<double>(),
                    pj.at("mu").get<double>());
    return {ScalarField(g, std::move(v)), p};
}

}  // namespace lelab
