#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "setret/encoder.hpp"
#include "setret/retrieval.hpp"
#include "setret/types.hpp"

namespace setret {

// All dataset files are line-delimited JSON records (UTF-8, one per line).

void write_triplets(std::ostream& out, std::span<const TripletSample> samples);
void write_triplets(const std::string& path, std::span<const TripletSample> samples);
std::vector<TripletSample> read_triplets(const std::string& path);

void write_corpus(std::ostream& out, std::span<const Document> docs);
void write_corpus(const std::string& path, std::span<const Document> docs);
std::vector<Document> read_corpus(const std::string& path);

void write_queries(std::ostream& out, std::span<const JudgedQuery> queries);
void write_queries(const std::string& path, std::span<const JudgedQuery> queries);
std::vector<JudgedQuery> read_queries(const std::string& path);

// Versioned little-endian binary container holding one or two encoders
// (dims, seed, and all matrices). Round-trips losslessly.
void save_encoder(std::ostream& out, const EncoderParams<double>& params);
void save_encoder(const std::string& path, const EncoderParams<double>& params);
EncoderParams<double> load_encoder(const std::string& path);

void save_dual_encoder(std::ostream& out, const DualEncoder<double>& dual);
void save_dual_encoder(const std::string& path, const DualEncoder<double>& dual);
DualEncoder<double> load_dual_encoder(const std::string& path);

// Binary dense index: doc ids plus the embedding matrix.
void save_dense_index(std::ostream& out, const DenseIndex<double>& index);
void save_dense_index(const std::string& path, const DenseIndex<double>& index);
DenseIndex<double> load_dense_index(const std::string& path);

// Writes the full contents atomically enough for reruns: the bytes are
// assembled first, then written in one stream operation.
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace setret
