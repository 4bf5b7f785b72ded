#include "hrbc/frontend/printer.hpp"

namespace hrbc::frontend {
namespace {

class Printer {
 public:
  std::string take() { return std::move(out_); }

  void model(const ModelAST& ast) {
    for (const ConstDecl& c : ast.constants) {
      out_ += "const " + c.name + " = " + format_rational(c.value) + ";\n";
    }
    for (const ClassDecl& cls : ast.classes) {
      if (!out_.empty()) out_ += '\n';
      class_decl(cls);
    }
    out_ += "\nmain {\n";
    for (const InstanceDecl& inst : ast.instances) {
      line(1, instance(inst));
    }
    if (ast.can_spec.present) {
      line(1, "CAN {");
      can_entries(2, "priorities", ast.can_spec.priorities, false);
      can_entries(2, "delays", ast.can_spec.delays, true);
      line(1, "}");
    }
    out_ += "}\n";
  }

  void block(const Block& stmts, int indent) {
    if (stmts.empty()) {
      out_ += "{ }";
      return;
    }
    out_ += "{\n";
    for (const Statement& s : stmts) statement(s, indent + 1);
    pad(indent);
    out_ += '}';
  }

 private:
  void pad(int indent) { out_.append(static_cast<std::size_t>(indent) * 2, ' '); }

  void line(int indent, const std::string& text) {
    pad(indent);
    out_ += text;
    out_ += '\n';
  }

  static std::string expr(const Expr& e) { return to_string(e); }

  void class_decl(const ClassDecl& cls) {
    out_ += (cls.physical ? "physicalclass " : "softwareclass ") + cls.name + " {\n";
    line(1, "knownrebecs {");
    for (const KnownRebec& k : cls.known_rebecs) line(2, k.class_name + " " + k.name + ";");
    line(1, "}");
    line(1, "statevars {");
    for (const VarDecl& v : cls.state_vars) {
      line(2, std::string(to_string(v.type)) + " " + v.name + ";");
    }
    line(1, "}");
    for (const MsgSrv& srv : cls.msgsrvs) {
      std::string header = "msgsrv " + srv.name + "(";
      for (std::size_t i = 0; i < srv.params.size(); ++i) {
        if (i > 0) header += ", ";
        header += std::string(to_string(srv.params[i].type)) + " " + srv.params[i].name;
      }
      header += ") ";
      pad(1);
      out_ += header;
      block(srv.body, 1);
      out_ += '\n';
    }
    for (const Mode& m : cls.modes) {
      line(1, "mode " + m.name + " {");
      line(2, "inv(" + expr(m.invariant) + ")");
      for (const Flow& f : m.flows) line(2, f.var + "' = " + expr(f.rate) + ";");
      pad(2);
      out_ += "guard(" + expr(m.guard) + ") ";
      block(m.actions, 2);
      out_ += '\n';
      line(1, "}");
    }
    out_ += "}\n";
  }

  void statement(const Statement& s, int indent) {
    pad(indent);
    switch (s.kind) {
      case StmtKind::assign: out_ += s.name + " = " + expr(s.expr) + ";"; break;
      case StmtKind::if_else:
        out_ += "if (" + expr(s.expr) + ") ";
        block(s.then_block, indent);
        if (s.has_else) {
          out_ += " else ";
          block(s.else_block, indent);
        }
        break;
      case StmtKind::delay: out_ += "delay(" + expr(s.expr) + ");"; break;
      case StmtKind::set_mode: out_ += "setmode(" + s.name + ");"; break;
      case StmtKind::send: {
        out_ += s.target + "." + s.server + "(";
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          if (i > 0) out_ += ", ";
          out_ += expr(s.args[i]);
        }
        out_ += ");";
        break;
      }
      case StmtKind::send_set_mode: out_ += s.target + ".setMode(" + s.name + ");"; break;
    }
    out_ += '\n';
  }

  static std::string instance(const InstanceDecl& inst) {
    std::string text = inst.class_name + " " + inst.name + "(";
    for (std::size_t i = 0; i < inst.bindings.size(); ++i) {
      if (i > 0) text += ", ";
      text += inst.bindings[i].connection == Connection::can ? "@CAN " : "@Wire ";
      text += inst.bindings[i].rebec;
    }
    text += "):(";
    for (std::size_t i = 0; i < inst.init_args.size(); ++i) {
      if (i > 0) text += ", ";
      text += format_rational(inst.init_args[i]);
    }
    return text + ");";
  }

  void can_entries(int indent, const char* title, const std::vector<CanEntry>& entries,
                   bool arrow) {
    line(indent, std::string(title) + " {");
    for (const CanEntry& e : entries) {
      line(indent + 1, e.sender + " " + e.receiver + "." + e.server + (arrow ? " -> " : " ") +
                           format_rational(e.value) + ";");
    }
    line(indent, "}");
  }

  std::string out_;
};

}  // namespace

std::string pretty_print(const ModelAST& ast) {
  Printer p;
  p.model(ast);
  return p.take();
}

std::string pretty_print(const Block& block, int indent) {
  Printer p;
  p.block(block, indent);
  return p.take();
}

}  // namespace hrbc::frontend
