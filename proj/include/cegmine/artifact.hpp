#pragma once

#include <filesystem>
#include <iosfwd>

#include "cegmine/ceg.hpp"

namespace cegmine {

// Canonical single-document persistence of a database: relations, events,
// edges and fragment index. Written streaming with a fixed key order and
// compact layout, so equal databases produce byte-identical files.
void write_artifact(const CausalEventDatabase& db, std::ostream& out);
void write_artifact_file(const CausalEventDatabase& db,
                         const std::filesystem::path& path);

// Throws DataError on unknown format or structural problems.
CausalEventDatabase read_artifact_file(const std::filesystem::path& path);

}  // namespace cegmine
