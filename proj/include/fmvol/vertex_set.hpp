#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

namespace fmvol {

/// Sorted duplicate-free set of dense vertex (or edge) ids.
class VertexSet {
public:
    VertexSet() = default;
    VertexSet(std::initializer_list<int> ids) : ids_(ids) { normalize(); }
    explicit VertexSet(std::vector<int> ids) : ids_(std::move(ids)) { normalize(); }

    static VertexSet from_sorted(std::vector<int> ids) {
        VertexSet s;
        s.ids_ = std::move(ids);
        return s;
    }

    int size() const { return static_cast<int>(ids_.size()); }
    bool empty() const { return ids_.empty(); }
    const std::vector<int>& ids() const { return ids_; }

    bool contains(int v) const {
        return std::binary_search(ids_.begin(), ids_.end(), v);
    }

    void insert(int v) {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
        if (it == ids_.end() || *it != v)
            ids_.insert(it, v);
    }

    void erase(int v) {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
        if (it != ids_.end() && *it == v)
            ids_.erase(it);
    }

    bool is_subset_of(const VertexSet& other) const {
        return std::includes(other.ids_.begin(), other.ids_.end(),
                             ids_.begin(), ids_.end());
    }

    bool intersects(const VertexSet& other) const {
        auto a = ids_.begin();
        auto b = other.ids_.begin();
        while (a != ids_.end() && b != other.ids_.end()) {
            if (*a < *b)
                ++a;
            else if (*b < *a)
                ++b;
            else
                return true;
        }
        return false;
    }

    VertexSet unioned(const VertexSet& other) const {
        std::vector<int> out;
        out.reserve(ids_.size() + other.ids_.size());
        std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(),
                       other.ids_.end(), std::back_inserter(out));
        return from_sorted(std::move(out));
    }

    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    bool operator==(const VertexSet&) const = default;
    auto operator<=>(const VertexSet& other) const {
        return ids_ <=> other.ids_;
    }

private:
    void normalize() {
        std::sort(ids_.begin(), ids_.end());
        ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    }

    std::vector<int> ids_;
};

} // namespace fmvol
