#include "rowsim/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace rowsim {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("pgm: " + path + ": " + what);
}

/// Reads the next header token, collecting '#' comment lines.
std::string next_token(std::FILE* f, std::vector<std::string>& comments,
                       const std::string& path) {
    std::string tok;
    int c;
    while ((c = std::fgetc(f)) != EOF) {
        if (c == '#') {
            std::string comment;
            while ((c = std::fgetc(f)) != EOF && c != '\n') comment.push_back(char(c));
            comments.push_back(comment);
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(char(c));
    }
    if (tok.empty()) fail(path, "truncated header");
    return tok;
}

int parse_int(const std::string& tok, const std::string& path) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        fail(path, "malformed header field '" + tok + "'");
    }
}

}  // namespace

PgmImage load_pgm(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) fail(path, "cannot open file");

    PgmImage img;
    const std::string magic = next_token(f.get(), img.comments, path);
    if (magic != "P5") fail(path, "expected P5 magic, got '" + magic + "'");
    img.width = parse_int(next_token(f.get(), img.comments, path), path);
    img.height = parse_int(next_token(f.get(), img.comments, path), path);
    img.maxval = parse_int(next_token(f.get(), img.comments, path), path);
    if (img.width <= 0 || img.height <= 0) fail(path, "non-positive dimensions");
    if (img.maxval <= 0 || img.maxval > 65535) fail(path, "maxval out of range");

    const std::size_t n = std::size_t(img.width) * img.height;
    img.pixels.resize(n);
    if (img.maxval < 256) {
        std::vector<std::uint8_t> raw(n);
        if (std::fread(raw.data(), 1, n, f.get()) != n) fail(path, "truncated raster");
        for (std::size_t i = 0; i < n; ++i) img.pixels[i] = raw[i];
    } else {
        std::vector<std::uint8_t> raw(2 * n);
        if (std::fread(raw.data(), 1, 2 * n, f.get()) != 2 * n)
            fail(path, "truncated raster");
        for (std::size_t i = 0; i < n; ++i)
            img.pixels[i] =
                std::uint16_t((unsigned(raw[2 * i]) << 8) | raw[2 * i + 1]);
    }
    return img;
}

void save_pgm(const PgmImage& image, const std::string& path) {
    if (image.width <= 0 || image.height <= 0)
        throw std::invalid_argument("pgm: empty image");
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) fail(path, "cannot open for writing");

    std::fprintf(f.get(), "P5\n");
    for (const std::string& c : image.comments)
        std::fprintf(f.get(), "#%s\n", c.c_str());
    std::fprintf(f.get(), "%d %d\n%d\n", image.width, image.height, image.maxval);

    const std::size_t n = std::size_t(image.width) * image.height;
    if (image.pixels.size() != n) fail(path, "pixel count mismatch");
    if (image.maxval < 256) {
        std::vector<std::uint8_t> raw(n);
        for (std::size_t i = 0; i < n; ++i)
            raw[i] = std::uint8_t(std::min<int>(image.pixels[i], image.maxval));
        if (std::fwrite(raw.data(), 1, n, f.get()) != n) fail(path, "short write");
    } else {
        std::vector<std::uint8_t> raw(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint16_t v =
                std::uint16_t(std::min<int>(image.pixels[i], image.maxval));
            raw[2 * i] = std::uint8_t(v >> 8);
            raw[2 * i + 1] = std::uint8_t(v & 0xff);
        }
        if (std::fwrite(raw.data(), 1, 2 * n, f.get()) != 2 * n)
            fail(path, "short write");
    }
}

}  // namespace rowsim
