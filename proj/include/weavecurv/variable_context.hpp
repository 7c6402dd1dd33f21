#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace weavecurv {

// Immutable, shared list of variable names: first the ambient coordinates
// x_1..x_n, then any formal parameters.  Every symbolic object keeps a
// handle to its context; objects from different contexts never mix.
class VariableContext {
public:
    static std::shared_ptr<const VariableContext> make(std::vector<std::string> coords,
                                                       std::vector<std::string> params = {}) {
        if (coords.size() < 2) throw Error("need at least two coordinates");
        std::set<std::string> seen;
        std::vector<std::string> all = std::move(coords);
        std::size_t n = all.size();
        all.insert(all.end(), params.begin(), params.end());
        for (const auto& name : all) {
            if (name.empty()) throw Error("empty variable name");
            if (!seen.insert(name).second) throw Error("duplicate variable name '" + name + "'");
        }
        return std::shared_ptr<const VariableContext>(new VariableContext(std::move(all), n));
    }

    // Standard context with coordinates x1..xn plus optional parameters.
    static std::shared_ptr<const VariableContext> standard(std::size_t n,
                                                           std::vector<std::string> params = {}) {
        std::vector<std::string> coords;
        coords.reserve(n);
        for (std::size_t i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
        return make(std::move(coords), std::move(params));
    }

    std::size_t num_coords() const { return n_coords_; }
    std::size_t num_params() const { return names_.size() - n_coords_; }
    std::size_t num_vars() const { return names_.size(); }

    const std::string& name(std::size_t i) const { return names_.at(i); }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        return std::nullopt;
    }

    bool is_coord(std::size_t i) const { return i < n_coords_; }

    friend bool operator==(const VariableContext& a, const VariableContext& b) {
        return a.n_coords_ == b.n_coords_ && a.names_ == b.names_;
    }

private:
    VariableContext(std::vector<std::string> names, std::size_t n_coords)
        : names_(std::move(names)), n_coords_(n_coords) {}

    std::vector<std::string> names_;
    std::size_t n_coords_;
};

using CtxPtr = std::shared_ptr<const VariableContext>;

inline void require_same_ctx(const CtxPtr& a, const CtxPtr& b) {
    if (a == b) return;
    if (a && b && *a == *b) return;
    throw BackendMismatch();
}

} // namespace weavecurv
