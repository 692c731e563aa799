#pragma once

#include <iosfwd>
#include <string>

#include "entangled/graph.hpp"
#include "entangled/kernel.hpp"
#include "entangled/paraproduct.hpp"
#include "entangled/step_function.hpp"

namespace entangled {

// Text formats. Lines are whitespace-separated; blank lines and lines starting
// with '#' are ignored; any line order; duplicate cells are an error.
//
//   STEP d=<dim> scale=<k>          then  <i1> ... <id> <num>/<den>
//   KERNEL m=<m> n=<n> scale=<k>    then  <x-indices...> <y-indices...> <num>/<den>
//   GRAPH m=<m> n=<n>               then  <i> <j>
//   COEFF m=<m> n=<n> sig=<flags>   then  <k> <ix> <jy> <num>/<den>
//
// The COEFF signature flags are one character per axis ('1' or 'h'), x-axes
// first.

StepFunction parse_step_function(std::istream& in);
void write_step_function(std::ostream& out, const StepFunction& f);

PerfectKernel parse_kernel(std::istream& in);
void write_kernel(std::ostream& out, const PerfectKernel& k);

BipartiteGraph parse_graph(std::istream& in);
void write_graph(std::ostream& out, const BipartiteGraph& g);

HaarCoefficientField parse_coefficients(std::istream& in, int* m_out = nullptr,
                                        int* n_out = nullptr);
void write_coefficients(std::ostream& out, const HaarCoefficientField& field, int m, int n);

// File helpers; wrap the stream parsers with the path in error messages.
StepFunction load_step_function(const std::string& path);
PerfectKernel load_kernel(const std::string& path);
BipartiteGraph load_graph(const std::string& path);

// FNV-1a 64-bit digest of a file's bytes, as fixed-width hex.
std::string file_digest(const std::string& path);

}  // namespace entangled
