/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   webdav_xml.hpp
/// @brief  Build and parse DAV: multistatus bodies (the only XML this
///         project speaks). The parser is a tolerant tag scanner that
///         accepts arbitrary namespace prefixes.

#ifndef FEDGATE_WEBDAV_XML_HPP
#define FEDGATE_WEBDAV_XML_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fedgate::dav {

struct ResourceProps {
  std::string href;  // percent-encoded path
  bool is_collection = false;
  std::optional<uint64_t> content_length;
};

/// 207 body with one <D:response> per resource.
std::string build_multistatus(const std::vector<ResourceProps>& resources);

/// Extract (href, collection flag, length) triples from a multistatus
/// body. Unknown elements are skipped; hrefs are returned XML-unescaped
/// but still percent-encoded.
std::vector<ResourceProps> parse_multistatus(std::string_view xml);

/// Bodies of every non-nested `<tag>` element, in document order,
/// XML-unescaped. Namespace prefixes and case are ignored. Also used for
/// the ListBucketV2 payloads of S3 endpoints.
std::vector<std::string> element_texts(std::string_view xml,
                                       std::string_view tag);

/// First element body only.
std::optional<std::string> first_element_text(std::string_view xml,
                                              std::string_view tag);

}  // namespace fedgate::dav

#endif
