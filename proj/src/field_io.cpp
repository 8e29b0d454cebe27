#include <wavelab/field_io.hpp>

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace wavelab {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix)
{
    return std::filesystem::path(stem.string() + suffix);
}

void write_doubles(const std::filesystem::path& path, const double* data, std::size_t count)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigurationError("cannot open " + path.string());
    for (std::size_t i = 0; i < count; ++i) {
        auto bits = std::bit_cast<std::uint64_t>(data[i]);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        char bytes[8];
        std::memcpy(bytes, &bits, 8);
        out.write(bytes, 8);
    }
}

std::vector<double> read_doubles(const std::filesystem::path& path, std::size_t count)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigurationError("cannot open " + path.string());
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        char bytes[8];
        if (!in.read(bytes, 8)) throw ConfigurationError("truncated field payload " + path.string());
        std::uint64_t bits;
        std::memcpy(&bits, bytes, 8);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        v[i] = std::bit_cast<double>(bits);
    }
    return v;
}

void write_header(const std::filesystem::path& stem, const TorusGrid& g, const char* kind)
{
    nlohmann::json h;
    h["dim"] = g.dim();
    h["N"] = g.points_per_axis();
    h["period"] = g.period();
    h["kind"] = kind;
    if (std::string(kind) == "spectrum") h["layout"] = "r2c-half-interleaved";
    std::ofstream out(with_suffix(stem, ".json"));
    out << h.dump(2) << "\n";
}

TorusGrid read_header(const std::filesystem::path& stem, const char* kind)
{
    std::ifstream in(with_suffix(stem, ".json"));
    if (!in) throw ConfigurationError("missing field header for " + stem.string());
    const auto h = nlohmann::json::parse(in);
    if (h.at("kind").get<std::string>() != kind)
        throw ConfigurationError("field header kind mismatch for " + stem.string());
    return TorusGrid(h.at("dim").get<int>(), h.at("N").get<int>(), h.value("period", two_pi));
}

}  // namespace

void write_field(const std::filesystem::path& stem, const GridField& f)
{
    write_header(stem, f.grid, "grid");
    write_doubles(with_suffix(stem, ".bin"), f.samples.data(), static_cast<std::size_t>(f.samples.size()));
}

void write_field(const std::filesystem::path& stem, const SpectrumField& f)
{
    write_header(stem, f.grid, "spectrum");
    write_doubles(with_suffix(stem, ".bin"), reinterpret_cast<const double*>(f.coefficients.data()),
                  2 * static_cast<std::size_t>(f.coefficients.size()));
}

GridField read_grid_field(const std::filesystem::path& stem)
{
    const TorusGrid g = read_header(stem, "grid");
    const auto v = read_doubles(with_suffix(stem, ".bin"), g.size());
    return {g, Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()))};
}

SpectrumField read_spectrum_field(const std::filesystem::path& stem)
{
    const TorusGrid g = read_header(stem, "spectrum");
    const auto v = read_doubles(with_suffix(stem, ".bin"), 2 * g.spectrum_size());
    SpectrumField f(g);
    std::memcpy(reinterpret_cast<double*>(f.coefficients.data()), v.data(), v.size() * sizeof(double));
    return f;
}

}  // namespace wavelab
