#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "birat/field.hpp"

namespace birat {

/// Exact sparse linear algebra kept in reduced row echelon form. Columns
/// are processed in their given order, so results are deterministic: the
/// particular solution zeroes all free columns, and nullspace vectors are
/// emitted one per free column in column order.
template <FieldElem K>
class LinearSystem {
public:
    explicit LinearSystem(FieldCtx<K> fc, int ncols) : fc_(fc), ncols_(ncols) {}

    /// Adds the equation sum coeffs[i]*x_i = rhs.
    void add_row(std::map<int, K> coeffs, K rhs) {
        for (auto it = coeffs.begin(); it != coeffs.end();)
            it = FieldCtx<K>::is_zero(it->second) ? coeffs.erase(it) : std::next(it);

        // Pivot rows contain only free columns (RREF invariant), so one
        // elimination pass per pivot column present in the new row suffices.
        std::vector<std::pair<int, K>> hits;
        for (const auto& [c, v] : coeffs)
            if (pivots_.count(c)) hits.emplace_back(c, v);
        for (const auto& [c, f] : hits) {
            coeffs.erase(c);
            const Row& prow = pivots_.at(c);
            for (const auto& [cc, vv] : prow.a) add_to(coeffs, cc, -(f * vv));
            rhs = rhs - f * prow.rhs;
        }

        if (coeffs.empty()) {
            if (!FieldCtx<K>::is_zero(rhs)) consistent_ = false;
            return;
        }
        int lead = coeffs.begin()->first;
        K pivot = coeffs.begin()->second;
        Row row;
        row.rhs = rhs / pivot;
        for (const auto& [c, v] : coeffs)
            if (c != lead) row.a.emplace(c, v / pivot);

        // back-substitute to keep earlier pivot rows free of this column
        for (auto& [col, prow] : pivots_) {
            auto it = prow.a.find(lead);
            if (it == prow.a.end()) continue;
            K f = it->second;
            prow.a.erase(it);
            for (const auto& [c, v] : row.a) add_to(prow.a, c, -(f * v));
            prow.rhs = prow.rhs - f * row.rhs;
        }
        pivots_.emplace(lead, std::move(row));
    }

    bool consistent() const { return consistent_; }
    int rank() const { return static_cast<int>(pivots_.size()); }
    int ncols() const { return ncols_; }

    /// One solution with all free variables zero, or nullopt.
    std::optional<std::vector<K>> particular_solution() const {
        if (!consistent_) return std::nullopt;
        std::vector<K> x(ncols_, fc_.zero());
        for (const auto& [col, row] : pivots_) x[col] = row.rhs;
        return x;
    }

    /// Basis of the homogeneous solution space, one vector per free column.
    std::vector<std::vector<K>> nullspace_basis() const {
        std::vector<std::vector<K>> basis;
        for (int f = 0; f < ncols_; ++f) {
            if (pivots_.count(f)) continue;
            std::vector<K> v(ncols_, fc_.zero());
            v[f] = fc_.one();
            for (const auto& [col, row] : pivots_) {
                auto it = row.a.find(f);
                if (it != row.a.end()) v[col] = -it->second;
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

private:
    struct Row {
        std::map<int, K> a;
        K rhs;
    };

    static void add_to(std::map<int, K>& m, int c, K v) {
        auto it = m.find(c);
        if (it == m.end()) {
            if (!FieldCtx<K>::is_zero(v)) m.emplace(c, std::move(v));
        } else {
            it->second = it->second + v;
            if (FieldCtx<K>::is_zero(it->second)) m.erase(it);
        }
    }

    FieldCtx<K> fc_;
    int ncols_;
    bool consistent_ = true;
    std::map<int, Row> pivots_; // pivot column -> normalized row without the pivot entry
};

} // namespace birat
