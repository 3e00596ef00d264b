#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "birat/field.hpp"

namespace birat {

class VariableSet;
using VarSetPtr = std::shared_ptr<const VariableSet>;

/// An ordered list of distinct variable names. The order is fixed at
/// creation and defines monomial exponent positions for every polynomial
/// built over the set.
class VariableSet {
public:
    explicit VariableSet(std::vector<std::string> names);

    static VarSetPtr make(std::vector<std::string> names) {
        return std::make_shared<VariableSet>(std::move(names));
    }
    /// x1..xn style sets.
    static VarSetPtr numbered(const std::string& stem, int count, int first = 1);

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }

    /// Index of a name, or -1.
    int index_of(const std::string& name) const;

    /// New set with extra names appended. Names that would clash get a
    /// numeric suffix; the chosen names are reported through `out_names`.
    VarSetPtr extended(const std::vector<std::string>& extra,
                       std::vector<std::string>* out_names = nullptr) const;

    /// New set containing exactly the chosen indices, in their current order.
    VarSetPtr restricted(const std::vector<int>& keep) const;

    /// A name not currently in the set, derived from `base`.
    std::string fresh_name(const std::string& base) const;

    bool operator==(const VariableSet& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

} // namespace birat
