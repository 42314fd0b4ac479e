#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <execution>
#include <numeric>
#include <optional>
#include <type_traits>
#include <vector>

namespace subrig {

/// Evaluates f(0..count-1) in parallel; results are in index order.
///
/// If any call throws, the exception from the lowest failing index is
/// rethrown after all calls finish.
template <class F>
auto parallel_map(std::size_t count, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>>
{
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::size_t> indices(count);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    std::for_each(std::execution::par, indices.begin(), indices.end(), [&](std::size_t i) {
        try {
            slots[i].emplace(f(i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

} // namespace subrig
