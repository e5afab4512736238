#pragma once

#include <map>
#include <vector>

#include "algvar/algebra.hpp"

namespace algvar::detail {

// Closes per-sort element lists under the signature's operations. Elements are
// arbitrary ordered keys; apply(op, args) computes the key of op applied to
// the argument keys. New elements are appended in discovery order, tuples are
// visited round by round in lexicographic order, so the result order depends
// only on the seeds and the operation semantics. Returns false if some sort
// grew past limit.
template <class Key, class Apply>
bool saturate(const Signature& sig, std::vector<std::vector<Key>>& elems,
              std::vector<std::map<Key, Elem>>& index, Apply&& apply,
              std::size_t limit = static_cast<std::size_t>(-1)) {
  const std::size_t ns = sig.num_sorts();
  std::vector<std::size_t> done(ns, 0);
  bool first = true;
  while (true) {
    std::vector<std::size_t> cur(ns);
    for (std::size_t s = 0; s < ns; ++s) cur[s] = elems[s].size();
    for (OpId o = 0; o < sig.num_ops(); ++o) {
      const auto& op = sig.op(o);
      std::vector<std::size_t> radices;
      for (auto in : op.inputs) radices.push_back(cur[in]);
      std::vector<const Key*> args(op.inputs.size());
      bool overflow = false;
      for_each_tuple(radices, [&](std::span<const Elem> t) {
        if (overflow) return;
        if (!first) {
          bool old = true;
          for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i] >= done[op.inputs[i]]) {
              old = false;
              break;
            }
          if (old) return;
        }
        for (std::size_t i = 0; i < t.size(); ++i) args[i] = &elems[op.inputs[i]][t[i]];
        Key out = apply(o, args);
        auto& idx = index[op.output];
        if (idx.find(out) == idx.end()) {
          idx.emplace(out, static_cast<Elem>(elems[op.output].size()));
          elems[op.output].push_back(std::move(out));
          if (elems[op.output].size() > limit) overflow = true;
        }
      });
      if (overflow) return false;
    }
    first = false;
    bool grew = false;
    for (std::size_t s = 0; s < ns; ++s) {
      if (elems[s].size() != cur[s]) grew = true;
      done[s] = cur[s];
    }
    if (!grew) return true;
  }
}

}  // namespace algvar::detail
