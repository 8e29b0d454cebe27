#pragma once

#include <wavelab/field.hpp>

#include <filesystem>

namespace wavelab {

// Flat little-endian float64 payload `<stem>.bin` plus `<stem>.json` header
// {dim, N, period, kind}. Spectra store the half layout as interleaved (re, im).
void write_field(const std::filesystem::path& stem, const GridField& f);
void write_field(const std::filesystem::path& stem, const SpectrumField& f);

GridField read_grid_field(const std::filesystem::path& stem);
SpectrumField read_spectrum_field(const std::filesystem::path& stem);

}  // namespace wavelab
