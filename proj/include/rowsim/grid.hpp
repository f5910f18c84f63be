#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rowsim {

/// Dense row-major image grid. (i, j) = (row from top, column from left).
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int height, int width, T fill = T{})
        : height_(height), width_(width),
          data_(static_cast<std::size_t>(height) * width, fill) {
        if (height <= 0 || width <= 0)
            throw std::invalid_argument("Grid dimensions must be positive");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int i, int j) { return data_[static_cast<std::size_t>(i) * width_ + j]; }
    const T& at(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * width_ + j];
    }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    bool same_shape(int h, int w) const { return height_ == h && width_ == w; }
    template <typename U>
    bool same_shape(const Grid<U>& o) const {
        return same_shape(o.height(), o.width());
    }

    bool operator==(const Grid& o) const {
        return height_ == o.height_ && width_ == o.width_ && data_ == o.data_;
    }

private:
    int height_{0};
    int width_{0};
    std::vector<T> data_;
};

using MaskGrid = Grid<std::uint8_t>;
using FloatGrid = Grid<float>;

template <typename A, typename B>
inline void require_same_shape(const Grid<A>& a, const Grid<B>& b,
                               const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace rowsim
