#pragma once

#include <cstdint>
#include <vector>

#include "core.hpp"

namespace zlab
{
using u128 = unsigned __int128;

/// Open-addressing map from 128-bit keys to V. Keys with the top bit set are
/// reserved. Iteration order is a function of the insertion sequence only.
template <class V>
class FlatMap128
{
public:
    explicit FlatMap128(std::size_t expected = 16)
    {
        std::size_t cap = 16;
        while (cap < 2 * expected)
            cap <<= 1;
        keys_.assign(cap, kEmpty);
        vals_.assign(cap, V{});
    }

    V& operator[](u128 key)
    {
        if (2 * (size_ + 1) > keys_.size())
            grow();
        std::size_t i = slot(key);
        if (keys_[i] == kEmpty)
        {
            keys_[i] = key;
            ++size_;
        }
        return vals_[i];
    }

    std::size_t size() const noexcept { return size_; }

    template <class F>
    void for_each(F&& f) const
    {
        for (std::size_t i = 0; i < keys_.size(); ++i)
            if (keys_[i] != kEmpty)
                f(keys_[i], vals_[i]);
    }

    void clear()
    {
        std::fill(keys_.begin(), keys_.end(), kEmpty);
        std::fill(vals_.begin(), vals_.end(), V{});
        size_ = 0;
    }

private:
    static constexpr u128 kEmpty = ~u128{0};

    static std::uint64_t mix(u128 key) noexcept
    {
        return splitmix64(static_cast<std::uint64_t>(key) ^ splitmix64(static_cast<std::uint64_t>(key >> 64)));
    }

    std::size_t slot(u128 key) const noexcept
    {
        const std::size_t mask = keys_.size() - 1;
        std::size_t i = mix(key) & mask;
        while (keys_[i] != kEmpty && keys_[i] != key)
            i = (i + 1) & mask;
        return i;
    }

    void grow()
    {
        std::vector<u128> old_keys = std::move(keys_);
        std::vector<V> old_vals = std::move(vals_);
        keys_.assign(old_keys.size() * 2, kEmpty);
        vals_.assign(old_keys.size() * 2, V{});
        for (std::size_t i = 0; i < old_keys.size(); ++i)
            if (old_keys[i] != kEmpty)
            {
                std::size_t j = slot(old_keys[i]);
                keys_[j] = old_keys[i];
                vals_[j] = old_vals[i];
            }
    }

    std::vector<u128> keys_;
    std::vector<V> vals_;
    std::size_t size_ = 0;
};

} // namespace zlab
