#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "effekta/syntax.hpp"

namespace effekta {

enum class MonadTag { Exception, NondetList, Distribution, PointedOutput };

std::string_view tag_name(MonadTag t);
std::optional<MonadTag> parse_tag(std::string_view s);

// One output event (location, natural).
struct Output {
  std::string location;
  std::uint64_t value;

  friend bool operator==(const Output&, const Output&) = default;
};

// A monadic element over payloads T. Which fields are meaningful depends on
// the tag:
//   Exception      state Val with one item, Raised with `exception`, or Bottom
//   NondetList     items in order, duplicates kept
//   Distribution   items with parallel positive weights, no repeated item
//   PointedOutput  word plus one item, or no item for the bottom payload
template <class T>
struct M {
  enum class State { Val, Raised, Bottom };

  explicit M(MonadTag t) : tag(t) {}

  MonadTag tag;
  State state = State::Val;
  std::string exception;
  std::vector<T> items;
  std::vector<mpq_class> weights;
  std::vector<Output> word;

  static M raised(std::string exc) {
    M m{MonadTag::Exception};
    m.state = State::Raised;
    m.exception = std::move(exc);
    return m;
  }

  static M list(std::vector<T> xs) {
    M m{MonadTag::NondetList};
    m.items = std::move(xs);
    return m;
  }

  static M output(std::vector<Output> w, std::optional<T> payload) {
    M m{MonadTag::PointedOutput};
    m.word = std::move(w);
    if (payload) m.items.push_back(std::move(*payload));
    return m;
  }

  // Adds weight w to x, merging equal payloads.
  void add(const T& x, mpq_class w) {
    if (w == 0) return;
    w.canonicalize();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i] == x) {
        weights[i] += w;
        return;
      }
    }
    items.push_back(x);
    weights.push_back(w);
  }

  bool is_bottom_payload() const { return tag == MonadTag::PointedOutput && items.empty(); }

  mpq_class mass() const {
    mpq_class s = 0;
    for (const auto& w : weights) s += w;
    return s;
  }

  std::optional<mpq_class> weight_of(const T& x) const {
    for (std::size_t i = 0; i < items.size(); ++i)
      if (items[i] == x) return weights[i];
    return std::nullopt;
  }

  friend bool operator==(const M& a, const M& b) {
    if (a.tag != b.tag) return false;
    switch (a.tag) {
      case MonadTag::Exception:
        return a.state == b.state && a.exception == b.exception && a.items == b.items;
      case MonadTag::NondetList: return a.items == b.items;
      case MonadTag::PointedOutput: return a.word == b.word && a.items == b.items;
      case MonadTag::Distribution:
        if (a.items.size() != b.items.size()) return false;
        for (std::size_t i = 0; i < a.items.size(); ++i) {
          auto w = b.weight_of(a.items[i]);
          if (!w || *w != a.weights[i]) return false;
        }
        return true;
    }
    return false;
  }
};

template <class T>
M<T> unit(MonadTag tag, T x) {
  M<T> m{tag};
  if (tag == MonadTag::Distribution) {
    m.add(x, 1);
  } else {
    m.items.push_back(std::move(x));
  }
  return m;
}

template <class T>
M<T> bottom(MonadTag tag) {
  M<T> m{tag};
  if (tag == MonadTag::Exception) m.state = M<T>::State::Bottom;
  return m;
}

template <class B, class A, class F>
M<B> bind(const M<A>& m, F&& f) {
  M<B> out{m.tag};
  switch (m.tag) {
    case MonadTag::Exception:
      if (m.state != M<A>::State::Val) {
        out.state = m.state == M<A>::State::Raised ? M<B>::State::Raised : M<B>::State::Bottom;
        out.exception = m.exception;
        return out;
      }
      return f(m.items.front());
    case MonadTag::NondetList:
      for (const auto& x : m.items) {
        M<B> r = f(x);
        for (auto& y : r.items) out.items.push_back(std::move(y));
      }
      return out;
    case MonadTag::Distribution:
      for (std::size_t i = 0; i < m.items.size(); ++i) {
        M<B> r = f(m.items[i]);
        for (std::size_t j = 0; j < r.items.size(); ++j) out.add(r.items[j], m.weights[i] * r.weights[j]);
      }
      return out;
    case MonadTag::PointedOutput: {
      out.word = m.word;
      if (m.items.empty()) return out;
      M<B> r = f(m.items.front());
      out.word.insert(out.word.end(), r.word.begin(), r.word.end());
      out.items = std::move(r.items);
      return out;
    }
  }
  return out;
}

template <class B, class A, class G>
M<B> fmap(const M<A>& m, G&& g) {
  M<B> out{m.tag};
  out.state = m.state == M<A>::State::Val      ? M<B>::State::Val
              : m.state == M<A>::State::Raised ? M<B>::State::Raised
                                               : M<B>::State::Bottom;
  out.exception = m.exception;
  out.word = m.word;
  if (m.tag == MonadTag::Distribution) {
    for (std::size_t i = 0; i < m.items.size(); ++i) out.add(g(m.items[i]), m.weights[i]);
    return out;
  }
  for (const auto& x : m.items) out.items.push_back(g(x));
  return out;
}

// The approximation order of each instance.
template <class T>
bool order_leq(const M<T>& a, const M<T>& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case MonadTag::Exception: return a.state == M<T>::State::Bottom || a == b;
    case MonadTag::NondetList:
      return a.items.size() <= b.items.size() && std::equal(a.items.begin(), a.items.end(), b.items.begin());
    case MonadTag::Distribution:
      for (std::size_t i = 0; i < a.items.size(); ++i) {
        auto w = b.weight_of(a.items[i]);
        if (!w || a.weights[i] > *w) return false;
      }
      return true;
    case MonadTag::PointedOutput:
      if (a.items.empty())
        return a.word.size() <= b.word.size() && std::equal(a.word.begin(), a.word.end(), b.word.begin());
      return a == b;
  }
  return false;
}

template <class T, class P>
std::string show(const M<T>& m, P&& payload) {
  std::string s;
  switch (m.tag) {
    case MonadTag::Exception:
      if (m.state == M<T>::State::Raised) return "Exc(" + m.exception + ")";
      if (m.state == M<T>::State::Bottom) return "bot";
      return payload(m.items.front());
    case MonadTag::NondetList:
      s = "[";
      for (std::size_t i = 0; i < m.items.size(); ++i) s += (i ? ", " : "") + payload(m.items[i]);
      return s + "]";
    case MonadTag::Distribution:
      s = "[";
      for (std::size_t i = 0; i < m.items.size(); ++i)
        s += (i ? ", " : "") + m.weights[i].get_str() + ": " + payload(m.items[i]);
      return s + "]";
    case MonadTag::PointedOutput:
      s = "<";
      for (std::size_t i = 0; i < m.word.size(); ++i)
        s += (i ? "." : "") + std::string("(") + m.word[i].location + "," + std::to_string(m.word[i].value) + ")";
      if (m.word.empty()) s += "eps";
      return s + ", " + (m.items.empty() ? std::string("bot") : payload(m.items.front())) + ">";
  }
  return s;
}

// Operations and their run-time meaning.
struct OperationImpl {
  enum class Kind { Raise, Choose, Write };

  Symbol op;
  Kind kind;
  std::string param;  // exception name for raise, location for write
  OpSignature signature;
};

using Impls = std::map<Symbol, OperationImpl>;

bool compatible(OperationImpl::Kind k, MonadTag tag);
OpSignature standard_signature(OperationImpl::Kind k);

// nullopt is the undefined case of the partial function.
std::optional<M<Value>> mrun(MonadTag tag, const OperationImpl& impl, const std::vector<Value>& args);

}  // namespace effekta
