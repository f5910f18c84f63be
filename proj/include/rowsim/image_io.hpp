#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rowsim {

/// Binary (P5) portable graymap. 16-bit rasters are most-significant byte
/// first, per the Netpbm convention.
struct PgmImage {
    int width{0};
    int height{0};
    int maxval{255};
    std::vector<std::uint16_t> pixels;  // row-major
    std::vector<std::string> comments;
};

PgmImage load_pgm(const std::string& path);
void save_pgm(const PgmImage& image, const std::string& path);

}  // namespace rowsim
