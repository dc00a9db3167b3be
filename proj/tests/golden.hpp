#pragma once

#include <string>

#include "effekta/syntax.hpp"

namespace golden {

using effekta::intern;
using effekta::OpSignature;
using effekta::Signatures;
using effekta::Type;

inline Signatures exception_sigs() {
  Signatures s;
  s.insert_or_assign(intern("raise_PredZero"), OpSignature{{}, Type::bot()});
  s.insert_or_assign(intern("raise_e"), OpSignature{{}, Type::bot()});
  return s;
}

inline Signatures nondet_sigs() {
  Signatures s;
  s.insert_or_assign(intern("choose"), OpSignature{{}, Type::boolean()});
  return s;
}

inline Signatures output_sigs() {
  Signatures s;
  s.insert_or_assign(intern("write_l"), OpSignature{{Type::nat()}, Type::unit()});
  s.insert_or_assign(intern("write_l2"), OpSignature{{Type::nat()}, Type::unit()});
  return s;
}

inline const std::string predfun =
    "def predfun = (fun(x: Nat): Nat ! eps | raise_PredZero -> "
    "do y <- iszero(x); if y then raise_PredZero() else pred(x));\n";


inline const std::string with_h = "with {raise_PredZero() =s -> return 0; finally x -> return x} handle ";

inline const std::string choose_e = "do y <- choose(); if y then return 0 else return 1";

inline const std::string chfun_up =
    "def chfun_up = (rec f(x: Nat): Nat ! choose . choose* = "
    "do y <- choose(); if y then return x else f succ(x));\n";

inline const std::string chfun_down =
    "def chfun_down = (rec f(x: Nat): Nat ! choose* = "
    "do z <- iszero(x); if z then return x else "
    "do y <- choose(); if y then return x else do p <- pred(x); f p);\n";

inline const std::string wfun_up =
    "def wfun_up = (rec f(x: Nat): Unit ! (write_l . write_l2)^w = "
    "write_l(x); write_l2(x); f succ(x));\n";

// at least one round of writes; the body always writes before testing x
inline const std::string wfun_down =
    "def wfun_down = (rec f(x: Nat): Unit ! (write_l . write_l2) . (write_l . write_l2)* = "
    "write_l(x); write_l2(x); do z <- iszero(x); if z then return unit else do p <- pred(x); f p);\n";

inline const std::string wfun_down_star =
    "def wfun_down = (rec f(x: Nat): Unit ! (write_l . write_l2)* = "
    "write_l(x); write_l2(x); do z <- iszero(x); if z then return unit else do p <- pred(x); f p);\n";

inline const std::string with_h1 = "with {write_l2(x) =c -> write_l(x); finally x -> return x} handle ";

inline const std::string with_h2 =
    "with {write_l2(x) =c -> do b <- even(x); if b then return unit else write_l(x); "
    "finally x -> return x} handle ";

}  // namespace golden

#include "effekta/semantics.hpp"

namespace golden {

inline effekta::Impls impls_for(const Signatures& sigs) {
  using effekta::OperationImpl;
  effekta::Impls impls;
  for (const auto& [op, sig] : sigs) {
    const std::string& name = effekta::symbol_name(op);
    OperationImpl impl{op, OperationImpl::Kind::Choose, "", sig};
    if (name.rfind("raise_", 0) == 0) impl = {op, OperationImpl::Kind::Raise, name.substr(6), sig};
    if (name.rfind("write_", 0) == 0) impl = {op, OperationImpl::Kind::Write, name.substr(6), sig};
    impls.insert_or_assign(op, impl);
  }
  return impls;
}

inline effekta::Semantics exceptions() { return {effekta::MonadTag::Exception, impls_for(exception_sigs())}; }
inline effekta::Semantics lists() { return {effekta::MonadTag::NondetList, impls_for(nondet_sigs())}; }
inline effekta::Semantics distributions() { return {effekta::MonadTag::Distribution, impls_for(nondet_sigs())}; }
inline effekta::Semantics outputs() { return {effekta::MonadTag::PointedOutput, impls_for(output_sigs())}; }

}  // namespace golden
