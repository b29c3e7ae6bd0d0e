#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace mechsynth {

/// Value-or-error holder used on the hot evaluation paths where exceptions
/// would be too costly (assembly failures are routine during a search).
template <typename T, typename E>
class Expected {
public:
    Expected(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
    Expected(E error) : storage_(std::in_place_index<1>, std::move(error)) {}

    bool has_value() const noexcept { return storage_.index() == 0; }
    explicit operator bool() const noexcept { return has_value(); }

    const T& value() const
    {
        if (!has_value()) throw std::logic_error("Expected::value() on error");
        return std::get<0>(storage_);
    }
    T& value()
    {
        if (!has_value()) throw std::logic_error("Expected::value() on error");
        return std::get<0>(storage_);
    }
    const E& error() const
    {
        if (has_value()) throw std::logic_error("Expected::error() on value");
        return std::get<1>(storage_);
    }

    const T& operator*() const { return value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, E> storage_;
};

} // namespace mechsynth
