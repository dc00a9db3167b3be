#include "effekta/monad.hpp"

namespace effekta {

std::string_view tag_name(MonadTag t) {
  switch (t) {
    case MonadTag::Exception: return "exception";
    case MonadTag::NondetList: return "list";
    case MonadTag::Distribution: return "distribution";
    case MonadTag::PointedOutput: return "output";
  }
  return "?";
}

std::optional<MonadTag> parse_tag(std::string_view s) {
  for (MonadTag t : {MonadTag::Exception, MonadTag::NondetList, MonadTag::Distribution, MonadTag::PointedOutput})
    if (tag_name(t) == s) return t;
  return std::nullopt;
}

bool compatible(OperationImpl::Kind k, MonadTag tag) {
  switch (k) {
    case OperationImpl::Kind::Raise: return tag == MonadTag::Exception;
    case OperationImpl::Kind::Choose: return tag == MonadTag::NondetList || tag == MonadTag::Distribution;
    case OperationImpl::Kind::Write: return tag == MonadTag::PointedOutput;
  }
  return false;
}

OpSignature standard_signature(OperationImpl::Kind k) {
  switch (k) {
    case OperationImpl::Kind::Raise: return {{}, Type::bot()};
    case OperationImpl::Kind::Choose: return {{}, Type::boolean()};
    case OperationImpl::Kind::Write: return {{Type::nat()}, Type::unit()};
  }
  return {{}, Type::unit()};
}

std::optional<M<Value>> mrun(MonadTag tag, const OperationImpl& impl, const std::vector<Value>& args) {
  if (!compatible(impl.kind, tag) || args.size() != impl.signature.args.size()) return std::nullopt;
  switch (impl.kind) {
    case OperationImpl::Kind::Raise: return M<Value>::raised(impl.param);
    case OperationImpl::Kind::Choose:
      if (tag == MonadTag::NondetList) return M<Value>::list({Value::boolean(true), Value::boolean(false)});
      {
        M<Value> d(MonadTag::Distribution);
        d.add(Value::boolean(true), mpq_class(1, 2));
        d.add(Value::boolean(false), mpq_class(1, 2));
        return d;
      }
    case OperationImpl::Kind::Write: {
      auto n = args.front().numeral();
      if (!n) return std::nullopt;
      return M<Value>::output({{impl.param, *n}}, Value::unit());
    }
  }
  return std::nullopt;
}

}  // namespace effekta
