#pragma once

// File formats.
//
// CSV: a header row (`q,p,W` for Wigner grids, `phi,x,w` for sinograms)
// followed by one row per sample, slow axis first, values printed with 17
// significant digits.
//
// Binary container: one line of JSON (the header) terminated by '\n',
// immediately followed by the payload: count0 * count1 IEEE-754 float64
// values, little-endian, row-major (first axis slow). Header keys:
//
//   {"format":"iontomo-container","version":1,"kind":"wigner_grid"|"sinogram",
//    "dtype":"float64","byte_order":"little","layout":"row-major",
//    "axes":[{"name":..,"min":..,"max":..,"count":..}, {...}],
//    "payload_bytes":N}
//
// For sinograms the first axis is {"name":"phi","count":N} with the implied
// angles i*pi/N on [0, pi).

#include <filesystem>
#include <string>
#include <string_view>

#include "iontomo/grid.hpp"
#include "iontomo/oscillator.hpp"
#include "iontomo/tomography.hpp"

namespace iontomo::io {

enum class Format { kCsv, kBin };

Format parse_format(std::string_view name);

std::string grid_to_csv(const WignerGrid& grid);
WignerGrid grid_from_csv(std::string_view text);
std::string grid_to_bin(const WignerGrid& grid);
WignerGrid grid_from_bin(std::string_view bytes);

std::string sinogram_to_csv(const OpticalSinogram& s);
OpticalSinogram sinogram_from_csv(std::string_view text);
std::string sinogram_to_bin(const OpticalSinogram& s);
OpticalSinogram sinogram_from_bin(std::string_view bytes);

/// Columns t, re_eps, im_eps, re_deps, im_deps, wronskian.
std::string trajectory_to_csv(const EpsilonTrajectory& traj);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

/// Dispatch on `format`; readers detect the format from the content.
void write_grid(const std::filesystem::path& path, const WignerGrid& grid,
                Format format);
WignerGrid read_grid(const std::filesystem::path& path);
void write_sinogram(const std::filesystem::path& path, const OpticalSinogram& s,
                    Format format);
OpticalSinogram read_sinogram(const std::filesystem::path& path);

}  // namespace iontomo::io
