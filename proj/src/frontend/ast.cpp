#include "hrbc/frontend/ast.hpp"

#include <algorithm>

namespace hrbc::frontend {
namespace {

template <typename T>
const T* find_named(const std::vector<T>& items, const std::string& name) {
  auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.name == name; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

const char* to_string(PrimType type) {
  switch (type) {
    case PrimType::int_type: return "int";
    case PrimType::real_type: return "real";
    case PrimType::float_type: return "float";
  }
  return "int";
}

const MsgSrv* ClassDecl::find_msgsrv(const std::string& server) const {
  return find_named(msgsrvs, server);
}

const Mode* ClassDecl::find_mode(const std::string& mode) const { return find_named(modes, mode); }

const VarDecl* ClassDecl::find_var(const std::string& var) const {
  return find_named(state_vars, var);
}

const ClassDecl* ModelAST::find_class(const std::string& name) const {
  return find_named(classes, name);
}

const InstanceDecl* ModelAST::find_instance(const std::string& name) const {
  return find_named(instances, name);
}

}  // namespace hrbc::frontend
