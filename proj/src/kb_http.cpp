#include <httplib.h>


#include "tlx/kb.hpp"

namespace tlx {

namespace {

std::string percent_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

std::string fill(std::string tmpl, const std::string& slot, const std::string& value) {
  std::string encoded = percent_encode(value);
  for (std::size_t pos = tmpl.find(slot); pos != std::string::npos; pos = tmpl.find(slot, pos + encoded.size()))
    tmpl.replace(pos, slot.size(), encoded);
  return tmpl;
}

}  // namespace

std::string HttpKb::get(const std::string& path_and_query) {
  httplib::Client client(cfg_.endpoint);
  client.set_connection_timeout(cfg_.timeout_seconds, 0);
  client.set_read_timeout(cfg_.timeout_seconds, 0);
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
    auto res = client.Get(path_and_query);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    last_error = "HTTP " + std::to_string(res->status);
    if (res->status < 500) break;
  }
  throw TransportError("GET " + cfg_.endpoint + path_and_query + " failed: " + last_error);
}

std::vector<KbEntity> HttpKb::lookup_by_name(const std::string& name) {
  auto rows = parse_bindings(get(fill(cfg_.label_query, "{label}", name)));
  std::vector<KbEntity> out;
  for (const auto& row : rows) {
    auto it = row.find("entity");
    if (it == row.end() || it->second.empty()) throw TransportError("lookup response lacks an ?entity column");
    out.push_back(describe(it->second));
  }
  return out;
}

KbEntity HttpKb::describe(const std::string& entity_id) {
  auto rows = parse_bindings(get(fill(cfg_.describe_query, "{id}", entity_id)));
  KbEntity e;
  e.id = entity_id;
  for (const auto& row : rows) {
    auto p = row.find("p");
    auto o = row.find("o");
    if (p == row.end() || o == row.end()) throw TransportError("describe response lacks ?p/?o columns");
    if (p->second == "label")
      e.labels.push_back(o->second);
    else if (p->second == "type")
      e.types.push_back(o->second);
    else
      e.properties.emplace_back(p->second, o->second);
  }
  if (e.labels.empty()) e.labels.push_back(entity_id);
  return e;
}

}  // namespace tlx
