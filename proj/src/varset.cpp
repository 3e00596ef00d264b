#include "birat/varset.hpp"

namespace birat {

VariableSet::VariableSet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) throw InputError("empty variable name");
        auto [it, fresh] = index_.emplace(names_[i], static_cast<int>(i));
        (void)it;
        if (!fresh) throw InputError("duplicate variable name: " + names_[i]);
    }
}

VarSetPtr VariableSet::numbered(const std::string& stem, int count, int first) {
    std::vector<std::string> names;
    names.reserve(count);
    for (int i = 0; i < count; ++i) names.push_back(stem + std::to_string(first + i));
    return make(std::move(names));
}

int VariableSet::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

std::string VariableSet::fresh_name(const std::string& base) const {
    if (index_.find(base) == index_.end()) return base;
    for (int i = 2;; ++i) {
        std::string cand = base + "_" + std::to_string(i);
        if (index_.find(cand) == index_.end()) return cand;
    }
}

VarSetPtr VariableSet::extended(const std::vector<std::string>& extra,
                                std::vector<std::string>* out_names) const {
    std::vector<std::string> names = names_;
    std::vector<std::string> chosen;
    for (const auto& e : extra) {
        VariableSet tmp(names); // rebuild index including earlier additions
        std::string nm = tmp.fresh_name(e);
        names.push_back(nm);
        chosen.push_back(nm);
    }
    if (out_names) *out_names = chosen;
    return make(std::move(names));
}

VarSetPtr VariableSet::restricted(const std::vector<int>& keep) const {
    std::vector<std::string> names;
    names.reserve(keep.size());
    for (int i : keep) names.push_back(names_.at(i));
    return make(std::move(names));
}

} // namespace birat
