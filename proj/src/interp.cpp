#include "effekta/interp.hpp"

#include <functional>
#include <random>
#include <sstream>

#include "graph.hpp"

namespace effekta {

std::string_view interp_name(InterpKind k) {
  switch (k) {
    case InterpKind::ExcSets: return "ExcSets";
    case InterpKind::NondetAll01: return "NondetAll01";
    case InterpKind::NondetEx01: return "NondetEx01";
    case InterpKind::NondetCount: return "NondetCount";
    case InterpKind::OutputLength: return "OutputLength";
    case InterpKind::OutputExact: return "OutputExact";
    case InterpKind::DistSupport: return "DistSupport";
  }
  return "?";
}

const std::vector<InterpKind>& all_interp_kinds() {
  static const std::vector<InterpKind> kinds{InterpKind::ExcSets,     InterpKind::NondetAll01,  InterpKind::NondetEx01,
                                             InterpKind::NondetCount, InterpKind::OutputLength, InterpKind::OutputExact,
                                             InterpKind::DistSupport};
  return kinds;
}

std::optional<InterpKind> parse_interp(std::string_view s) {
  for (InterpKind k : all_interp_kinds())
    if (interp_name(k) == s) return k;
  return std::nullopt;
}

bool compatible(InterpKind k, MonadTag tag) {
  switch (k) {
    case InterpKind::ExcSets: return tag == MonadTag::Exception;
    case InterpKind::NondetAll01:
    case InterpKind::NondetEx01:
    case InterpKind::NondetCount: return tag == MonadTag::NondetList;
    case InterpKind::OutputLength:
    case InterpKind::OutputExact: return tag == MonadTag::PointedOutput;
    case InterpKind::DistSupport: return tag == MonadTag::Distribution;
  }
  return false;
}

std::string ExcSet::str() const {
  std::string s = "{";
  bool first = true;
  if (ok) {
    s += "ok";
    first = false;
  }
  for (const auto& n : names) {
    s += (first ? "" : ", ") + n;
    first = false;
  }
  return s + "}";
}

namespace {

const OperationImpl& require(Symbol op, OperationImpl::Kind kind, const Impls& impls) {
  auto it = impls.find(op);
  if (it == impls.end() || it->second.kind != kind) {
    const char* what = kind == OperationImpl::Kind::Raise    ? "raise"
                       : kind == OperationImpl::Kind::Choose ? "choose"
                                                             : "write";
    throw InterpError("operation " + symbol_name(op) + " is not a " + what + " operation");
  }
  return it->second;
}

void check_alphabet(const EffectAutomaton& e, OperationImpl::Kind kind, const Impls& impls) {
  for (Symbol s : e.alphabet()) require(s, kind, impls);
}

std::vector<std::vector<int>> successors(const EffectAutomaton& a) {
  std::vector<std::vector<int>> adj(a.size());
  for (int s = 0; s < a.size(); ++s)
    for (const auto& e : a.edges(s)) adj[s].push_back(e.target);
  return adj;
}

// Length of the longest accepted word, nullopt when unbounded.
std::optional<unsigned long> longest(const EffectAutomaton& e) {
  const EffectAutomaton t = trim(e);
  if (has_infinite_words(t)) return std::nullopt;
  const auto adj = successors(t);
  const SccResult scc = strongly_connected(adj);
  for (char c : scc.nontrivial)
    if (c) return std::nullopt;
  // acyclic: Tarjan numbers components in reverse topological order
  std::vector<int> order(t.size());
  for (int s = 0; s < t.size(); ++s) order[s] = s;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return scc.comp[a] < scc.comp[b]; });
  std::vector<long> best(t.size(), -1);
  for (int s : order) {
    long b = t.fin(s) ? 0 : -1;
    for (int w : adj[s])
      if (best[w] >= 0) b = std::max(b, best[w] + 1);
    best[s] = b;
  }
  return static_cast<unsigned long>(std::max(0L, best[t.initial()]));
}

}  // namespace

ExcSet hom_exceptions(const EffectAutomaton& e, const Impls& impls) {
  check_alphabet(e, OperationImpl::Kind::Raise, impls);
  const EffectAutomaton t = trim(e);
  ExcSet r;
  r.ok = accepts_epsilon(t);
  for (const auto& edge : t.edges(t.initial())) r.names.insert(impls.at(edge.symbol).param);
  return r;
}

int hom_nondet01(const EffectAutomaton& e, const Impls& impls) {
  check_alphabet(e, OperationImpl::Kind::Choose, impls);
  const EffectAutomaton t = trim(e);
  return t.edges(t.initial()).empty() ? 0 : 1;
}

Extended hom_count(const EffectAutomaton& e, const Impls& impls) {
  check_alphabet(e, OperationImpl::Kind::Choose, impls);
  auto n = longest(e);
  if (!n) return Extended::inf();
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, *n);
  return {r};
}

Extended hom_outlen(const EffectAutomaton& e, const Impls& impls) {
  check_alphabet(e, OperationImpl::Kind::Write, impls);
  auto n = longest(e);
  if (!n) return Extended::inf();
  return Extended::of(*n);
}

AbstractEffect abstract_effect(InterpKind k, const EffectAutomaton& e, const Impls& impls) {
  AbstractEffect a{k, {}, Extended::inf(), false, nullptr, {}};
  switch (k) {
    case InterpKind::ExcSets: a.exceptions = hom_exceptions(e, impls); break;
    case InterpKind::NondetAll01:
      if (hom_nondet01(e, impls) == 0) a.bound = Extended::of(1);
      break;
    case InterpKind::NondetEx01: a.some = hom_nondet01(e, impls) == 1; break;
    case InterpKind::NondetCount: a.bound = hom_count(e, impls); break;
    case InterpKind::OutputLength: a.bound = hom_outlen(e, impls); break;
    case InterpKind::OutputExact:
      check_alphabet(e, OperationImpl::Kind::Write, impls);
      a.exact = std::make_shared<const EffectAutomaton>(e);
      for (const auto& [op, impl] : impls)
        if (impl.kind == OperationImpl::Kind::Write) a.writes.emplace_back(impl.param, op);
      break;
    case InterpKind::DistSupport: check_alphabet(e, OperationImpl::Kind::Choose, impls); break;
  }
  return a;
}

std::string AbstractEffect::str() const {
  switch (kind) {
    case InterpKind::ExcSets: return exceptions.str();
    case InterpKind::NondetAll01: return bound.infinite() ? "1" : "0";
    case InterpKind::NondetEx01: return some ? "1" : "0";
    case InterpKind::NondetCount:
    case InterpKind::OutputLength: return bound.str();
    case InterpKind::OutputExact: return describe(*exact).str();
    case InterpKind::DistSupport: return "support";
  }
  return "?";
}

namespace detail {

std::optional<Word> extract(const std::vector<Output>& word, const AbstractEffect& a) {
  Word w;
  for (const auto& o : word) {
    auto it = std::find_if(a.writes.begin(), a.writes.end(), [&](const auto& p) { return p.first == o.location; });
    if (it == a.writes.end()) return std::nullopt;
    w.push_back(it->second);
  }
  return w;
}

}  // namespace detail

const LawResult* LawReport::find(std::string_view condition) const {
  for (const auto& r : results)
    if (r.condition == condition) return &r;
  return nullptr;
}

std::string LawReport::str() const {
  std::ostringstream os;
  for (const auto& r : results) {
    os << subject << " universe=" << universe << " " << r.condition << ": " << (r.pass ? "pass" : "FAIL") << " ("
       << r.checked << " checks)";
    if (!r.pass) os << " witness " << r.witness;
    os << "\n";
  }
  return os.str();
}

Impls standard_impls(MonadTag tag) {
  Impls impls;
  auto add = [&](const char* name, OperationImpl::Kind k, const char* param) {
    const Symbol s = intern(name);
    impls.insert_or_assign(s, OperationImpl{s, k, param, standard_signature(k)});
  };
  switch (tag) {
    case MonadTag::Exception:
      add("raise_e", OperationImpl::Kind::Raise, "e");
      add("raise_e2", OperationImpl::Kind::Raise, "e2");
      break;
    case MonadTag::NondetList:
    case MonadTag::Distribution: add("choose", OperationImpl::Kind::Choose, ""); break;
    case MonadTag::PointedOutput:
      add("write_l", OperationImpl::Kind::Write, "l");
      add("write_l2", OperationImpl::Kind::Write, "l2");
      break;
  }
  return impls;
}

std::vector<EffectAutomaton> default_effect_samples(MonadTag tag) {
  std::vector<const char*> texts;
  switch (tag) {
    case MonadTag::Exception:
      texts = {"eps", "raise_e", "eps | raise_e", "raise_e2 . raise_e", "raise_e2^w", "eps | raise_e | raise_e2"};
      break;
    case MonadTag::NondetList:
    case MonadTag::Distribution:
      texts = {"eps", "choose", "choose . choose", "choose*", "choose^w", "eps | choose"};
      break;
    case MonadTag::PointedOutput:
      texts = {"eps", "write_l", "write_l . write_l2", "(write_l . write_l2)*", "(write_l . write_l2)^w",
               "eps | write_l2"};
      break;
  }
  std::vector<EffectAutomaton> out;
  for (const char* t : texts) out.push_back(compile(parse_effect_expr(t)));
  return out;
}

namespace {

using MX = M<int>;
using MMX = M<MX>;

const std::vector<Output> kOutputs{{"l", 0}, {"l2", 0}};

// All elements within the size bounds: lists and words up to `len`,
// distribution weights in steps of 1/denom.
template <class T>
std::vector<M<T>> elements(MonadTag tag, const std::vector<T>& xs, int len, int denom) {
  std::vector<M<T>> out;
  switch (tag) {
    case MonadTag::Exception:
      for (const auto& x : xs) out.push_back(unit(tag, x));
      out.push_back(M<T>::raised("e"));
      out.push_back(M<T>::raised("e2"));
      out.push_back(bottom<T>(tag));
      break;
    case MonadTag::NondetList: {
      std::vector<M<T>> layer{M<T>::list({})};
      for (int n = 0; n <= len; ++n) {
        out.insert(out.end(), layer.begin(), layer.end());
        std::vector<M<T>> next;
        for (const auto& m : layer)
          for (const auto& x : xs) {
            M<T> e = m;
            e.items.push_back(x);
            next.push_back(std::move(e));
          }
        layer = std::move(next);
      }
      break;
    }
    case MonadTag::Distribution: {
      std::function<void(std::size_t, int, M<T>)> go = [&](std::size_t i, int left, M<T> m) {
        if (i == xs.size()) {
          out.push_back(std::move(m));
          return;
        }
        for (int k = 0; k <= left; ++k) {
          M<T> e = m;
          e.add(xs[i], mpq_class(k, denom));
          go(i + 1, left - k, std::move(e));
        }
      };
      go(0, denom, M<T>(tag));
      break;
    }
    case MonadTag::PointedOutput: {
      std::vector<std::vector<Output>> words{{}}, layer{{}};
      for (int n = 0; n < len; ++n) {
        std::vector<std::vector<Output>> next;
        for (const auto& w : layer)
          for (const auto& o : kOutputs) {
            auto e = w;
            e.push_back(o);
            next.push_back(std::move(e));
          }
        words.insert(words.end(), next.begin(), next.end());
        layer = std::move(next);
      }
      for (const auto& w : words) {
        out.push_back(M<T>::output(w, std::nullopt));
        for (const auto& x : xs) out.push_back(M<T>::output(w, x));
      }
      break;
    }
  }
  return out;
}

std::string show_int(int x) { return "x" + std::to_string(x); }
std::string show_mx(const MX& m) { return show(m, show_int); }
std::string show_mmx(const MMX& m) { return show(m, show_mx); }

std::string show_set(unsigned mask, int n) {
  std::string s = "{";
  bool first = true;
  for (int x = 0; x < n; ++x)
    if (mask >> x & 1) {
      s += (first ? "" : ",") + show_int(x);
      first = false;
    }
  return s + "}";
}

std::string show_fun(const std::vector<int>& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + show_int(static_cast<int>(i)) + "->" + show_int(f[i]);
  return s + "]";
}

// All functions from {0..n-1} to {0..m-1}.
std::vector<std::vector<int>> functions(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> f(n, 0);
  for (;;) {
    out.push_back(f);
    int i = 0;
    while (i < n && ++f[i] == m) f[i++] = 0;
    if (i == n) break;
  }
  return out;
}

std::vector<int> range(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

MX apply(const MX& m, const std::vector<int>& f) {
  return fmap<int>(m, [&](int x) { return f[x]; });
}

MX join(const MMX& mm) {
  return bind<int>(mm, [](const MX& m) { return m; });
}

struct Tally {
  LawResult r;
  explicit Tally(std::string name) { r.condition = std::move(name); }
  void check(bool ok, const std::function<std::string()>& witness) {
    ++r.checked;
    if (ok || !r.pass) return;
    r.pass = false;
    r.witness = witness();
  }
};

}  // namespace

LawReport lifting_axiom_suite(InterpKind k, int universe, const std::vector<EffectAutomaton>& samples,
                              const Impls& impls) {
  MonadTag tag = MonadTag::Exception;
  for (MonadTag t : {MonadTag::Exception, MonadTag::NondetList, MonadTag::Distribution, MonadTag::PointedOutput})
    if (compatible(k, t)) tag = t;
  universe = std::clamp(universe, 1, 4);
  LawReport report{std::string(interp_name(k)), universe, {}};

  const auto xs = range(universe);
  const auto mx = elements(tag, xs, 3, 4);
  const auto inner = elements(tag, xs, 2, 2);
  const auto mmx = elements(tag, inner, 2, 2);
  const unsigned preds = 1u << universe;
  auto in = [](unsigned mask) { return [mask](int x) { return (mask >> x & 1) != 0; }; };

  std::vector<AbstractEffect> abs;
  std::vector<std::string> names;
  for (const auto& e : samples) {
    abs.push_back(abstract_effect(k, e, impls));
    names.push_back(describe(e).str());
  }

  Tally nat("naturality");
  for (std::size_t i = 0; i < abs.size(); ++i)
    for (int ny = 1; ny <= 3; ++ny) {
      const auto fs = functions(universe, ny);
      for (const auto& f : fs)
        for (unsigned a = 0; a < (1u << ny); ++a)
          for (const auto& m : mx) {
            const bool left = lift_member(abs[i], m, [&](int x) { return (a >> f[x] & 1) != 0; });
            const bool right = lift_member(abs[i], apply(m, f), in(a));
            nat.check(left == right, [&] {
              return "effect " + names[i] + ", f=" + show_fun(f) + ", A=" + show_set(a, ny) + ", m=" + show_mx(m);
            });
          }
    }

  Tally mono("monotonicity");
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (!eff_includes(samples[i], samples[j]).yes()) continue;
      for (unsigned a = 0; a < preds; ++a)
        for (const auto& m : mx)
          mono.check(!lift_member(abs[i], m, in(a)) || lift_member(abs[j], m, in(a)), [&] {
            return names[i] + " <= " + names[j] + ", A=" + show_set(a, universe) + ", m=" + show_mx(m);
          });
    }

  Tally unit_law("unit");
  const AbstractEffect pure = abstract_effect(k, eps_automaton(), impls);
  for (unsigned a = 0; a < preds; ++a)
    for (int x : xs)
      if (a >> x & 1)
        unit_law.check(lift_member(pure, unit(tag, x), in(a)),
                       [&] { return "A=" + show_set(a, universe) + ", x=" + show_int(x); });

  Tally mul("multiplication");
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const AbstractEffect both = abstract_effect(k, eff_concat(samples[i], samples[j]), impls);
      for (unsigned a = 0; a < preds; ++a) {
        auto inner_ok = [&](const MX& m) { return lift_member(abs[j], m, in(a)); };
        for (const auto& mm : mmx) {
          if (!lift_member(abs[i], mm, inner_ok)) continue;
          const MX flat = join(mm);
          mul.check(lift_member(both, flat, in(a)), [&] {
            return "effects " + names[i] + " then " + names[j] + ", A=" + show_set(a, universe) +
                   ", m=" + show_mmx(mm) + " flattens to " + show_mx(flat);
          });
        }
      }
    }

  Tally img("image");
  for (std::size_t i = 0; i < abs.size(); ++i)
    for (int ny = 1; ny <= 3; ++ny) {
      const auto my = elements(tag, range(ny), 3, 4);
      for (const auto& f : functions(universe, ny)) {
        std::vector<MX> images;
        for (const auto& m : mx) images.push_back(apply(m, f));
        for (unsigned a = 0; a < preds; ++a) {
          unsigned fa = 0;
          for (int x : xs)
            if (a >> x & 1) fa |= 1u << f[x];
          for (const auto& m : my) {
            if (!lift_member(abs[i], m, in(fa))) continue;
            bool found = false;
            for (std::size_t p = 0; p < mx.size() && !found; ++p)
              found = images[p] == m && lift_member(abs[i], mx[p], in(a));
            img.check(found, [&] {
              return "effect " + names[i] + ", f=" + show_fun(f) + ", A=" + show_set(a, universe) + ", m=" +
                     show_mx(m) + " has no preimage in the lifting of A";
            });
          }
        }
      }
    }

  Tally bot("bottom");
  for (std::size_t i = 0; i < abs.size(); ++i)
    for (unsigned a = 0; a < preds; ++a)
      bot.check(lift_member(abs[i], bottom<int>(tag), in(a)), [&] { return "effect " + names[i]; });

  for (Tally* t : {&nat, &mono, &unit_law, &mul, &img, &bot}) report.results.push_back(t->r);
  return report;
}

bool expected_failure(InterpKind k, std::string_view condition) {
  return k == InterpKind::NondetEx01 && (condition == "image" || condition == "multiplication");
}

LawReport kleisli_law_suite(MonadTag tag, int universe) {
  universe = std::clamp(universe, 1, 4);
  LawReport report{std::string(tag_name(tag)), universe, {}};
  const auto xs = range(universe);
  const auto mx = elements(tag, xs, 3, 8);

  // Kleisli maps X -> MX: a fixed pseudo-random family
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, mx.size() - 1);
  std::vector<std::vector<std::size_t>> maps;
  for (int n = 0; n < 12; ++n) {
    std::vector<std::size_t> f;
    for (int x = 0; x < universe; ++x) f.push_back(pick(rng));
    maps.push_back(std::move(f));
  }
  auto as_fn = [&](const std::vector<std::size_t>& f) { return [&](int x) { return mx[f[x]]; }; };

  Tally left("left unit");
  for (const auto& f : maps)
    for (int x : xs)
      left.check(bind<int>(unit(tag, x), as_fn(f)) == mx[f[x]], [&] { return "x=" + show_int(x); });

  Tally right("right unit");
  for (const auto& m : mx)
    right.check(bind<int>(m, [&](int x) { return unit(tag, x); }) == m, [&] { return "m=" + show_mx(m); });

  Tally assoc("associativity");
  for (const auto& m : mx)
    for (const auto& f : maps)
      for (const auto& g : maps) {
        const MX a = bind<int>(bind<int>(m, as_fn(f)), as_fn(g));
        const MX b = bind<int>(m, [&](int x) { return bind<int>(mx[f[x]], as_fn(g)); });
        assoc.check(a == b, [&] { return "m=" + show_mx(m); });
      }

  for (Tally* t : {&left, &right, &assoc}) report.results.push_back(t->r);
  return report;
}

}  // namespace effekta
