#include "nasalgan/nn/tensor.hpp"

#include <cmath>

#include "nasalgan/error.hpp"

namespace nasalgan::nn {

std::size_t shape_size(const Shape& shape) noexcept {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

template <typename T>
Tensor<T>::Tensor(Shape shape, T fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_size(shape_) != data_.size())
        throw UsageError("Tensor: shape " + shape_string(shape_) + " does not match " +
                         std::to_string(data_.size()) + " values");
}

template <typename T>
void Tensor<T>::fill(T v) {
    std::fill(data_.begin(), data_.end(), v);
}

template <typename T>
void Tensor<T>::reshape(Shape shape) {
    if (shape_size(shape) != data_.size())
        throw UsageError("Tensor::reshape: " + shape_string(shape_) + " -> " + shape_string(shape));
    shape_ = std::move(shape);
}

template <typename T>
bool Tensor<T>::all_finite() const noexcept {
    for (T v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

template <typename T>
T dot(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.size() != b.size()) throw UsageError("dot: size mismatch");
    T s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template class Tensor<float>;
template class Tensor<double>;
template float dot(const Tensor<float>&, const Tensor<float>&);
template double dot(const Tensor<double>&, const Tensor<double>&);

}  // namespace nasalgan::nn
