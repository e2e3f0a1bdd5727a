/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/webdav_xml.hpp"

#include <cctype>

#include "fedgate/util.hpp"

namespace fedgate::dav {

std::string build_multistatus(const std::vector<ResourceProps>& resources) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
      "<D:multistatus xmlns:D=\"DAV:\">\n";
  for (const auto& r : resources) {
    out += " <D:response>\n  <D:href>";
    out += util::xml_escape(r.href);
    out += "</D:href>\n  <D:propstat>\n   <D:prop>\n    <D:resourcetype>";
    if (r.is_collection) out += "<D:collection/>";
    out += "</D:resourcetype>\n";
    if (r.content_length)
      out += "    <D:getcontentlength>" + std::to_string(*r.content_length) +
             "</D:getcontentlength>\n";
    out +=
        "   </D:prop>\n   <D:status>HTTP/1.1 200 OK</D:status>\n"
        "  </D:propstat>\n </D:response>\n";
  }
  out += "</D:multistatus>\n";
  return out;
}

namespace {

/// Case-insensitive search for `<[prefix:]tag ...>` starting at `from`.
/// Returns the position just past the opening tag, or npos.
size_t find_open_tag(std::string_view xml, std::string_view tag, size_t from) {
  auto lower = [](char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  };
  for (size_t i = from; i + tag.size() + 1 < xml.size(); ++i) {
    if (xml[i] != '<') continue;
    size_t j = i + 1;
    if (j < xml.size() && xml[j] == '/') continue;  // closing tag
    // optional namespace prefix
    size_t name_start = j;
    while (j < xml.size() && xml[j] != ':' && xml[j] != '>' && xml[j] != ' ' &&
           xml[j] != '/' && xml[j] != '\t' && xml[j] != '\n')
      ++j;
    if (j < xml.size() && xml[j] == ':') name_start = ++j;
    while (j < xml.size() && xml[j] != '>' && xml[j] != ' ' && xml[j] != '/' &&
           xml[j] != '\t' && xml[j] != '\n')
      ++j;
    std::string_view name = xml.substr(name_start, j - name_start);
    if (name.size() != tag.size()) continue;
    bool match = true;
    for (size_t k = 0; k < tag.size(); ++k)
      if (lower(name[k]) != lower(tag[k])) { match = false; break; }
    if (!match) continue;
    // skip to end of the opening tag
    size_t close = xml.find('>', j);
    if (close == std::string_view::npos) return std::string_view::npos;
    if (xml[close - 1] == '/') return close + 1;  // self-closing
    return close + 1;
  }
  return std::string_view::npos;
}

/// Body of the first `tag` element at or after `from`, plus the position
/// just past its closing tag.
std::optional<std::pair<std::string_view, size_t>> element_body(
    std::string_view xml, std::string_view tag, size_t from, size_t until) {
  size_t start = find_open_tag(xml, tag, from);
  if (start == std::string_view::npos || start >= until) return std::nullopt;
  // find the matching close; nesting of the same tag is not used by DAV bodies
  auto lower = [](char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  };
  for (size_t i = start; i + 1 < until; ++i) {
    if (xml[i] != '<' || xml[i + 1] != '/') continue;
    size_t j = i + 2;
    size_t name_start = j;
    while (j < until && xml[j] != ':' && xml[j] != '>') ++j;
    if (j < until && xml[j] == ':') name_start = ++j;
    while (j < until && xml[j] != '>') ++j;
    std::string_view name = xml.substr(name_start, j - name_start);
    if (name.size() != tag.size()) continue;
    bool match = true;
    for (size_t k = 0; k < tag.size(); ++k)
      if (lower(name[k]) != lower(tag[k])) { match = false; break; }
    if (match) return std::make_pair(xml.substr(start, i - start), j + 1);
  }
  return std::nullopt;
}

bool contains_tag(std::string_view xml, std::string_view tag) {
  return find_open_tag(xml, tag, 0) != std::string_view::npos;
}

}  // namespace

std::vector<std::string> element_texts(std::string_view xml,
                                       std::string_view tag) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    auto body = element_body(xml, tag, pos, xml.size());
    if (!body) break;
    out.push_back(util::xml_unescape(std::string(body->first)));
    pos = body->second;
  }
  return out;
}

std::optional<std::string> first_element_text(std::string_view xml,
                                              std::string_view tag) {
  auto body = element_body(xml, tag, 0, xml.size());
  if (!body) return std::nullopt;
  return util::xml_unescape(std::string(body->first));
}

std::vector<ResourceProps> parse_multistatus(std::string_view xml) {
  std::vector<ResourceProps> out;
  size_t pos = 0;
  while (true) {
    auto response = element_body(xml, "response", pos, xml.size());
    if (!response) break;
    std::string_view body = response->first;
    pos = response->second;

    ResourceProps props;
    auto href = element_body(body, "href", 0, body.size());
    if (!href) continue;
    props.href = util::xml_unescape(util::trim(href->first));
    props.is_collection = contains_tag(body, "collection");
    auto len = element_body(body, "getcontentlength", 0, body.size());
    if (len) {
      try {
        props.content_length = std::stoull(util::trim(len->first));
      } catch (...) {
        // tolerate junk lengths
      }
    }
    out.push_back(std::move(props));
  }
  return out;
}

}  // namespace fedgate::dav
