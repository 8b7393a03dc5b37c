#include "setret/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "setret/query.hpp"

namespace setret {
namespace {

using ordered_json = nlohmann::ordered_json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

ordered_json parse_line(const std::string& line, const std::string& path, int line_no) {
  try {
    return ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ":" + std::to_string(line_no) + ": bad record: " + e.what());
  }
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw IoError("truncated binary file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void write_matrix(std::ostream& out, const Matd& m) {
  write_u64(out, static_cast<std::uint64_t>(m.rows()));
  write_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      std::uint64_t bits;
      const double value = m(r, c);
      static_assert(sizeof(bits) == sizeof(value));
      std::memcpy(&bits, &value, sizeof(bits));
      write_u64(out, bits);
    }
  }
}

Matd read_matrix(std::istream& in) {
  const auto rows = static_cast<Index>(read_u64(in));
  const auto cols = static_cast<Index>(read_u64(in));
  Matd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const std::uint64_t bits = read_u64(in);
      double value;
      std::memcpy(&value, &bits, sizeof(value));
      m(r, c) = value;
    }
  }
  return m;
}

constexpr std::uint64_t kEncoderMagic = 0x53455452454e4331ULL;  // "SETRENC1"
constexpr std::uint64_t kIndexMagic = 0x5345545249445831ULL;    // "SETRIDX1"

void write_one_encoder(std::ostream& out, const EncoderParams<double>& p) {
  write_u64(out, p.seed);
  write_matrix(out, p.embed_table);
  write_matrix(out, p.proj_weight);
  write_matrix(out, p.proj_bias);
}

EncoderParams<double> read_one_encoder(std::istream& in) {
  EncoderParams<double> p;
  p.seed = read_u64(in);
  p.embed_table = read_matrix(in);
  p.proj_weight = read_matrix(in);
  p.proj_bias = read_matrix(in);
  return p;
}

}  // namespace

void write_triplets(std::ostream& out, std::span<const TripletSample> samples) {
  for (const auto& s : samples) {
    ordered_json rec;
    rec["op"] = std::string(set_op_label(s.op));
    rec["anchor"] = s.anchor;
    rec["positives"] = s.positives;
    rec["negatives"] = s.negatives;
    out << rec.dump() << '\n';
  }
}

void write_triplets(const std::string& path, std::span<const TripletSample> samples) {
  auto out = open_out(path);
  write_triplets(out, samples);
}

std::vector<TripletSample> read_triplets(const std::string& path) {
  auto in = open_in(path);
  std::vector<TripletSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const ordered_json rec = parse_line(line, path, line_no);
    TripletSample s;
    s.op = set_op_from_label(rec.at("op").get<std::string>());
    s.anchor = rec.at("anchor").get<std::string>();
    s.positives = rec.at("positives").get<std::vector<std::string>>();
    s.negatives = rec.at("negatives").get<std::vector<std::string>>();
    s.validate();
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_corpus(std::ostream& out, std::span<const Document> docs) {
  for (const auto& d : docs) {
    ordered_json rec;
    rec["doc_id"] = d.doc_id;
    rec["title"] = d.title;
    rec["text"] = d.text;
    rec["attributes"] = d.attributes;
    out << rec.dump() << '\n';
  }
}

void write_corpus(const std::string& path, std::span<const Document> docs) {
  auto out = open_out(path);
  write_corpus(out, docs);
}

std::vector<Document> read_corpus(const std::string& path) {
  auto in = open_in(path);
  std::vector<Document> docs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const ordered_json rec = parse_line(line, path, line_no);
    Document d;
    d.doc_id = rec.at("doc_id").get<DocId>();
    d.title = rec.at("title").get<std::string>();
    d.text = rec.at("text").get<std::string>();
    d.attributes = rec.at("attributes").get<std::vector<std::string>>();
    docs.push_back(std::move(d));
  }
  return docs;
}

void write_queries(std::ostream& out, std::span<const JudgedQuery> queries) {
  for (const auto& q : queries) {
    ordered_json rec;
    rec["query_id"] = q.query_id;
    rec["text"] = q.text;
    rec["template"] = std::string(template_label(q.query.template_id()));
    rec["relevant_doc_ids"] = q.relevant;
    out << rec.dump() << '\n';
  }
}

void write_queries(const std::string& path, std::span<const JudgedQuery> queries) {
  auto out = open_out(path);
  write_queries(out, queries);
}

std::vector<JudgedQuery> read_queries(const std::string& path) {
  auto in = open_in(path);
  std::vector<JudgedQuery> queries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const ordered_json rec = parse_line(line, path, line_no);
    const auto text = rec.at("text").get<std::string>();
    BooleanQuery query = parse_query(text);
    const auto label = rec.at("template").get<std::string>();
    if (template_from_label(label) != query.template_id()) {
      throw IoError(path + ":" + std::to_string(line_no) + ": template field \"" + label +
                    "\" does not match query text \"" + text + "\"");
    }
    JudgedQuery q{rec.at("query_id").get<int>(), std::move(query), text,
                  rec.at("relevant_doc_ids").get<std::vector<DocId>>()};
    std::sort(q.relevant.begin(), q.relevant.end());
    queries.push_back(std::move(q));
  }
  return queries;
}

void save_encoder(std::ostream& out, const EncoderParams<double>& params) {
  write_u64(out, kEncoderMagic);
  write_u64(out, 1);
  write_one_encoder(out, params);
}

void save_encoder(const std::string& path, const EncoderParams<double>& params) {
  auto out = open_out(path);
  save_encoder(out, params);
}

EncoderParams<double> load_encoder(const std::string& path) {
  auto in = open_in(path);
  if (read_u64(in) != kEncoderMagic) throw IoError("not an encoder checkpoint: " + path);
  if (read_u64(in) != 1) throw IoError("expected a single-encoder checkpoint: " + path);
  return read_one_encoder(in);
}

void save_dual_encoder(std::ostream& out, const DualEncoder<double>& dual) {
  write_u64(out, kEncoderMagic);
  write_u64(out, 2);
  write_one_encoder(out, dual.query_params);
  write_one_encoder(out, dual.doc_params);
}

void save_dual_encoder(const std::string& path, const DualEncoder<double>& dual) {
  auto out = open_out(path);
  save_dual_encoder(out, dual);
}

DualEncoder<double> load_dual_encoder(const std::string& path) {
  auto in = open_in(path);
  if (read_u64(in) != kEncoderMagic) throw IoError("not an encoder checkpoint: " + path);
  if (read_u64(in) != 2) throw IoError("expected a dual-encoder checkpoint: " + path);
  DualEncoder<double> dual;
  dual.query_params = read_one_encoder(in);
  dual.doc_params = read_one_encoder(in);
  return dual;
}

void save_dense_index(std::ostream& out, const DenseIndex<double>& index) {
  write_u64(out, kIndexMagic);
  write_u64(out, index.doc_ids.size());
  for (const DocId id : index.doc_ids) write_u64(out, static_cast<std::uint64_t>(id));
  write_matrix(out, index.doc_embeddings);
}

void save_dense_index(const std::string& path, const DenseIndex<double>& index) {
  auto out = open_out(path);
  save_dense_index(out, index);
}

DenseIndex<double> load_dense_index(const std::string& path) {
  auto in = open_in(path);
  if (read_u64(in) != kIndexMagic) throw IoError("not a dense index file: " + path);
  DenseIndex<double> index;
  const auto n = read_u64(in);
  index.doc_ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    index.doc_ids.push_back(static_cast<DocId>(read_u64(in)));
  }
  index.doc_embeddings = read_matrix(in);
  if (index.doc_embeddings.rows() != static_cast<Index>(n)) {
    throw IoError("dense index row count does not match doc id count: " + path);
  }
  return index;
}

void write_text_file(const std::string& path, const std::string& contents) {
  auto out = open_out(path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing: " + path);
}

std::string read_text_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace setret
