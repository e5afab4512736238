#include "algvar/omega.hpp"

#include <deque>
#include <map>
#include <stdexcept>

#include "algvar/term.hpp"

namespace algvar {

namespace {
constexpr OpId kProd = 0, kMix = 1, kOpow = 2;
}

Signature wilke_signature(bool ordered) {
  return Signature({"plus", "omega"}, {{"prod", {0, 0}, 0}, {"mix", {0, 1}, 1}, {"opow", {0}, 1}}, ordered);
}

OmegaRecognizer OmegaRecognizer::make(Recognizer rec, Mode mode) {
  if (!(rec.algebra->signature().with_order(false) == wilke_signature()))
    throw AlgebraError("omega recognizer needs the signature plus, omega with prod, mix, opow");
  for (const auto& l : rec.letters)
    if (l.sort != 0) throw AlgebraError("letter '" + l.name + "' must map into plus");
  if (mode == Mode::omega_only)
    for (bool b : rec.accept[0])
      if (b) throw AlgebraError("omega-only recognizer accepts finite words");
  return OmegaRecognizer{std::move(rec), mode};
}

Lasso parse_lasso(const std::vector<std::string>& alphabet, std::string_view text) {
  auto semi = text.find(';');
  if (semi == std::string_view::npos) throw std::invalid_argument("lasso must be written u;v");
  Lasso l{parse_word(alphabet, text.substr(0, semi)), parse_word(alphabet, text.substr(semi + 1))};
  if (l.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  return l;
}

Elem evaluate_plus(const Recognizer& rec, const Word& w) {
  if (w.empty()) throw std::invalid_argument("empty word has no value in plus");
  Elem v = rec.letters[rec.letter(w[0])].image;
  for (std::size_t i = 1; i < w.size(); ++i) v = rec.algebra->apply(kProd, {v, rec.letters[rec.letter(w[i])].image});
  return v;
}

Elem evaluate_lasso(const Recognizer& rec, const Lasso& l) {
  const Elem z = rec.algebra->apply(kOpow, {evaluate_plus(rec, l.loop)});
  // an empty spoke multiplies by the adjoined unit
  return l.spoke.empty() ? z : rec.algebra->apply(kMix, {evaluate_plus(rec, l.spoke), z});
}

bool lasso_membership(const OmegaRecognizer& r, const Lasso& l) { return r.rec.accept[1][evaluate_lasso(r.rec, l)]; }

bool finite_membership(const OmegaRecognizer& r, const Word& w) { return r.rec.accept[0][evaluate_plus(r.rec, w)]; }

std::vector<std::size_t> ramsey_factorize(const FiniteAlgebra& alg, SortId s, const std::vector<Elem>& prefix,
                                          const std::vector<Elem>& period, std::size_t count) {
  if (period.empty()) throw std::invalid_argument("period must be nonempty");
  if (count < 2) throw std::invalid_argument("at least two cuts are needed");
  auto mul = product_op(alg.signature(), s);
  if (!mul || !detail::is_associative(alg, *mul)) throw AlgebraError("no associative product on the sort");
  const std::size_t p = prefix.size(), per = period.size(), m = alg.size(s);
  const std::size_t start = m;  // partial product of the empty block
  auto at = [&](std::size_t i) { return i < p ? prefix[i] : period[(i - p) % per]; };
  auto norm = [&](std::size_t i) { return i < p ? i : p + (i - p) % per; };
  const std::size_t positions = p + per, nodes = positions * (m + 1);
  auto node = [&](std::size_t pos, std::size_t part) { return pos * (m + 1) + part; };
  auto step = [&](std::size_t pos, std::size_t part) -> std::size_t {
    const Elem v = at(pos);
    return part == start ? v : alg.apply(*mul, {static_cast<Elem>(part), v});
  };

  // good[e][n]: from node n some path cuts infinitely often with blocks = e
  std::map<Elem, std::vector<char>> good_cache;
  auto good = [&](Elem e) -> const std::vector<char>& {
    auto it = good_cache.find(e);
    if (it != good_cache.end()) return it->second;
    std::vector<std::vector<std::size_t>> succ(nodes), pred(nodes);
    std::vector<std::pair<std::size_t, std::size_t>> cuts;
    for (std::size_t pos = 0; pos < positions; ++pos)
      for (std::size_t part = 0; part <= m; ++part) {
        const std::size_t np = step(pos, part), nx = norm(pos + 1);
        const std::size_t u = node(pos, part);
        succ[u].push_back(node(nx, np));
        if (np == e) {
          succ[u].push_back(node(nx, start));
          cuts.emplace_back(u, node(nx, start));
        }
      }
    for (std::size_t u = 0; u < nodes; ++u)
      for (auto v : succ[u]) pred[v].push_back(u);
    auto reach = [&](std::size_t from, const std::vector<std::vector<std::size_t>>& adj) {
      std::vector<char> seen(nodes, 0);
      std::deque<std::size_t> q{from};
      seen[from] = 1;
      while (!q.empty()) {
        auto u = q.front();
        q.pop_front();
        for (auto v : adj[u])
          if (!seen[v]) {
            seen[v] = 1;
            q.push_back(v);
          }
      }
      return seen;
    };
    std::vector<char> g(nodes, 0);
    for (auto [u, v] : cuts) {
      if (g[u]) continue;
      if (!reach(v, succ)[u]) continue;
      auto back = reach(u, pred);
      for (std::size_t x = 0; x < nodes; ++x)
        if (back[x]) g[x] = 1;
    }
    return good_cache.emplace(e, std::move(g)).first->second;
  };

  const std::size_t span = positions * (m + 1) + 1;
  for (std::size_t k0 = 0; k0 < positions; ++k0) {
    std::size_t part = start;
    for (std::size_t k1 = k0 + 1; k1 <= k0 + span; ++k1) {
      part = step(norm(k1 - 1), part);
      const Elem e = static_cast<Elem>(part);
      if (alg.apply(*mul, {e, e}) != e || !good(e)[node(norm(k1), start)]) continue;
      std::vector<std::size_t> cuts{k0, k1};
      while (cuts.size() < count) {
        const std::size_t c = cuts.back();
        std::size_t q = start;
        bool found = false;
        for (std::size_t j = c + 1; j <= c + span; ++j) {
          q = step(norm(j - 1), q);
          if (q == e && good(e)[node(norm(j), start)]) {
            cuts.push_back(j);
            found = true;
            break;
          }
        }
        if (!found) throw std::logic_error("ramsey factorization lost its extension");
      }
      return cuts;
    }
  }
  throw std::logic_error("no ramsey factorization found");
}

OmegaRecognizer omega_derivative(const OmegaRecognizer& r, OmegaDerivative kind, const Word& y, Elem z) {
  const auto& alg = *r.rec.algebra;
  SortedSubset acc = empty_subset(alg);
  const auto np = alg.size(0), nw = alg.size(1);
  auto yv = [&]() -> std::optional<Elem> {
    if (y.empty()) return std::nullopt;
    return evaluate_plus(r.rec, y);
  };
  switch (kind) {
    case OmegaDerivative::plus_left:
    case OmegaDerivative::plus_right: {
      auto v = yv();
      for (Elem x = 0; x < np; ++x) {
        Elem t = x;
        if (v) t = kind == OmegaDerivative::plus_left ? alg.apply(kProd, {*v, x}) : alg.apply(kProd, {x, *v});
        acc[0][x] = r.rec.accept[0][t];
      }
      return OmegaRecognizer::make(r.rec.with_accept(std::move(acc)), OmegaRecognizer::Mode::infinitary);
    }
    case OmegaDerivative::plus_mix:
      if (z >= nw) throw std::invalid_argument("context is not an omega element");
      for (Elem x = 0; x < np; ++x) acc[0][x] = r.rec.accept[1][alg.apply(kMix, {x, z})];
      return OmegaRecognizer::make(r.rec.with_accept(std::move(acc)), OmegaRecognizer::Mode::infinitary);
    case OmegaDerivative::plus_omega:
      for (Elem x = 0; x < np; ++x) acc[0][x] = r.rec.accept[1][alg.apply(kOpow, {x})];
      return OmegaRecognizer::make(r.rec.with_accept(std::move(acc)), OmegaRecognizer::Mode::infinitary);
    case OmegaDerivative::omega_left: {
      auto v = yv();
      for (Elem w = 0; w < nw; ++w) acc[1][w] = r.rec.accept[1][v ? alg.apply(kMix, {*v, w}) : w];
      return OmegaRecognizer::make(r.rec.with_accept(std::move(acc)), OmegaRecognizer::Mode::omega_only);
    }
  }
  throw std::invalid_argument("unknown derivative kind");
}

void require_wilke(const FiniteAlgebra& alg) {
  auto laws = presets::wilke(alg);
  auto rep = validate_laws(alg, laws);
  if (!rep.pass) {
    const auto& law = laws[*rep.failed_law];
    throw AlgebraError("law " + to_string(alg.signature(), law) + " fails at " +
                       describe_witness(alg, law, rep.witness));
  }
}

RecognizerQuotient syntactic_omega_semigroup(const OmegaRecognizer& r) {
  require_wilke(*r.rec.algebra);
  auto [trimmed, inclusion] = trim(r.rec);
  return syntactic_algebra(trimmed, omega_presentation(trimmed.algebra));
}

RecognizerQuotient syntactic_reduced_omega(const OmegaRecognizer& r) {
  if (r.mode != OmegaRecognizer::Mode::omega_only) throw std::invalid_argument("reduction needs an omega-only recognizer");
  auto syn = syntactic_omega_semigroup(r);
  auto red = reduce_quotient(syn.recognizer, omega_presentation(syn.recognizer.algebra), {1});
  return {red.recognizer, compose(red.projection, syn.projection)};
}

bool is_complete(const FiniteAlgebra& alg) {
  std::vector<char> hit(alg.size(1), 0);
  for (Elem t = 0; t < alg.size(0); ++t) {
    const Elem w = alg.apply(kOpow, {t});
    hit[w] = 1;
    for (Elem s = 0; s < alg.size(0); ++s) hit[alg.apply(kMix, {s, w})] = 1;
  }
  for (char h : hit)
    if (!h) return false;
  return true;
}

}  // namespace algvar
