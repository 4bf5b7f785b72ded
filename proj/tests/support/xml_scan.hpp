#pragma once

// Minimal scanner for the flat SpaceEx XML the backend writes.

#include <map>
#include <string>
#include <vector>

namespace support {

struct XmlLocation {
  std::string id;
  std::string name;
  std::string invariant;
  std::string flow;
};

struct XmlTransition {
  std::string source;
  std::string target;
  std::string guard;
  std::string assignment;
};

struct XmlComponent {
  std::vector<XmlLocation> locations;
  std::vector<XmlTransition> transitions;
  std::vector<std::string> params;
};

inline std::string xml_child(const std::string& body, const std::string& tag) {
  const std::string open = "<" + tag + ">";
  const std::size_t start = body.find(open);
  if (start == std::string::npos) return {};
  const std::size_t end = body.find("</" + tag + ">", start);
  return body.substr(start + open.size(), end - start - open.size());
}

inline std::string xml_attribute(const std::string& tag, const std::string& name) {
  const std::string key = " " + name + "=\"";
  const std::size_t start = tag.find(key);
  if (start == std::string::npos) return {};
  const std::size_t end = tag.find('"', start + key.size());
  return tag.substr(start + key.size(), end - start - key.size());
}

inline std::string xml_unescape(std::string s) {
  const std::pair<const char*, const char*> entities[] = {
      {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"}, {"&amp;", "&"}};
  for (const auto& [from, to] : entities) {
    for (std::size_t at = s.find(from); at != std::string::npos; at = s.find(from, at + 1)) {
      s.replace(at, std::string(from).size(), to);
    }
  }
  return s;
}

/// Calls `visit(open_tag, body)` for every `<element ...>body</element>`
/// and every self-closing `<element .../>`.
template <typename Visit>
void xml_elements(const std::string& xml, const std::string& element, Visit visit) {
  const std::string open = "<" + element + " ";
  const std::string close = "</" + element + ">";
  for (std::size_t at = xml.find(open); at != std::string::npos; at = xml.find(open, at + 1)) {
    const std::size_t tag_end = xml.find('>', at);
    const std::string tag = xml.substr(at, tag_end - at + 1);
    if (tag.size() >= 2 && tag[tag.size() - 2] == '/') {
      visit(tag, std::string());
      continue;
    }
    const std::size_t end = xml.find(close, tag_end);
    visit(tag, xml.substr(tag_end + 1, end - tag_end - 1));
  }
}

inline XmlComponent scan_spaceex(const std::string& xml) {
  XmlComponent out;
  xml_elements(xml, "param", [&](const std::string& tag, const std::string&) {
    out.params.push_back(xml_attribute(tag, "name"));
  });
  xml_elements(xml, "location", [&](const std::string& tag, const std::string& body) {
    out.locations.push_back({xml_attribute(tag, "id"), xml_attribute(tag, "name"),
                             xml_unescape(xml_child(body, "invariant")),
                             xml_unescape(xml_child(body, "flow"))});
  });
  xml_elements(xml, "transition", [&](const std::string& tag, const std::string& body) {
    out.transitions.push_back({xml_attribute(tag, "source"), xml_attribute(tag, "target"),
                               xml_unescape(xml_child(body, "guard")),
                               xml_unescape(xml_child(body, "assignment"))});
  });
  return out;
}

/// Problems with the urgency encoding: every urgent location must have
/// flow `urg' == 1` and invariant `urg <= 0`, and every transition into
/// one must reset `urg`.
inline std::vector<std::string> urgency_audit(const XmlComponent& c,
                                              const std::map<std::string, bool>& urgent_by_id) {
  std::vector<std::string> problems;
  for (const auto& l : c.locations) {
    if (!urgent_by_id.at(l.id)) continue;
    if (l.flow.find("urg' == 1") == std::string::npos) problems.push_back("flow of " + l.name);
    if (l.invariant.find("urg <= 0") == std::string::npos) {
      problems.push_back("invariant of " + l.name);
    }
  }
  for (const auto& t : c.transitions) {
    if (urgent_by_id.at(t.target) && t.assignment.find("urg := 0") == std::string::npos) {
      problems.push_back("transition " + t.source + " -> " + t.target);
    }
  }
  return problems;
}

}  // namespace support
