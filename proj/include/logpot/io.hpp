#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "logpot/geometry.hpp"

namespace logpot {

/// Bad user input (unreadable file, malformed JSON, unknown domain type).
class InputError : public Error {
 public:
  using Error::Error;
};

/// {"type":"disc","center":[x,y],"radius":r}
/// {"type":"polygon","vertices":[[x,y],...]}
/// {"type":"triangle","vertices":[[x,y],[x,y],[x,y]]}
Domain domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const Domain& d);

/// JSON domain, or a raster mask when the path ends in ".pgm".
Domain read_domain_file(const std::string& path);

/// Plain PGM (P2) with values 0/1. The first comment line carries
/// "origin <x> <y> h <h>"; image rows run top (largest y) to bottom.
void write_pgm_mask(std::ostream& out, const RasterGrid& g);
RasterGrid read_pgm_mask(std::istream& in);

/// Static horizontal bar chart.
void write_svg_bars(std::ostream& out, const std::string& title, const std::vector<std::string>& labels,
                    const std::vector<double>& values);

}  // namespace logpot
