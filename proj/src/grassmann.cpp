#include "gpach/grassmann.hpp"

namespace gpach {

int GeneratorRegistry::add(const std::string& label) {
  if (labels_.size() >= 64) throw std::length_error("GeneratorRegistry: at most 64 generators");
  auto [it, inserted] = index_.emplace(label, int(labels_.size()));
  if (!inserted) throw std::invalid_argument("GeneratorRegistry: duplicate label " + label);
  labels_.push_back(label);
  return it->second;
}

int GeneratorRegistry::index_of(const std::string& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

const std::string& GeneratorRegistry::label(int index) const {
  return labels_.at(std::size_t(index));
}

}  // namespace gpach
