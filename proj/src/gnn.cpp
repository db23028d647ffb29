#include "srf/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace srf {

std::string to_string(Readout readout) {
  switch (readout) {
    case Readout::sum_pool_graph: return "sum_pool_graph";
    case Readout::root_node: return "root_node";
    case Readout::per_node: return "per_node";
  }
  return "unknown";
}

Readout readout_from_string(const std::string& name) {
  if (name == "sum_pool_graph") return Readout::sum_pool_graph;
  if (name == "root_node") return Readout::root_node;
  if (name == "per_node") return Readout::per_node;
  throw std::invalid_argument("unknown readout: " + name);
}

std::int64_t GnnModel::num_params() const {
  std::int64_t n = 0;
  for (const auto& l : layers) {
    n += l.w1.size() + l.b1.size() + l.w2.size() + l.b2.size();
  }
  return n + readout_w.size() + readout_b.size();
}

namespace {

Eigen::MatrixXd xavier_uniform(RngState& rng, int rows, int cols) {
  const double a = std::sqrt(6.0 / (rows + cols));
  Eigen::MatrixXd w(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      w(i, j) = a * (2.0 * rng.next_unit() - 1.0);
    }
  }
  return w;
}

}  // namespace

GnnModel init_model(const GnnConfig& cfg, int input_dim, int num_classes,
                    RngState& rng) {
  if (cfg.layers < 1 || cfg.hidden < 1) {
    throw std::invalid_argument("init_model: layers and hidden must be >= 1");
  }
  if (input_dim < 1 || num_classes < 1) {
    throw std::invalid_argument("init_model: invalid dimensions");
  }
  GnnModel model;
  model.cfg = cfg;
  model.input_dim = input_dim;
  model.num_classes = num_classes;
  int width = input_dim;
  for (int l = 0; l < cfg.layers; ++l) {
    LayerParams p;
    p.w1 = xavier_uniform(rng, cfg.hidden, width + cfg.srf_width);
    p.b1 = Eigen::VectorXd::Zero(cfg.hidden);
    p.w2 = xavier_uniform(rng, cfg.hidden, cfg.hidden);
    p.b2 = Eigen::VectorXd::Zero(cfg.hidden);
    model.layers.push_back(std::move(p));
    width = cfg.hidden;
  }
  model.readout_w = xavier_uniform(rng, num_classes, cfg.hidden);
  model.readout_b = Eigen::VectorXd::Zero(num_classes);
  return model;
}

Eigen::VectorXd pack_params(const GnnModel& model) {
  Eigen::VectorXd flat(model.num_params());
  Eigen::Index at = 0;
  auto put = [&](const Eigen::MatrixXd& m) {
    flat.segment(at, m.size()) =
        Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    at += m.size();
  };
  for (const auto& l : model.layers) {
    put(l.w1);
    put(l.b1);
    put(l.w2);
    put(l.b2);
  }
  put(model.readout_w);
  put(model.readout_b);
  return flat;
}

void unpack_params(GnnModel& model, const Eigen::VectorXd& flat) {
  if (flat.size() != model.num_params()) {
    throw std::invalid_argument("unpack_params: size mismatch");
  }
  Eigen::Index at = 0;
  auto take = [&](auto& m) {
    Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) =
        flat.segment(at, m.size());
    at += m.size();
  };
  for (auto& l : model.layers) {
    take(l.w1);
    take(l.b1);
    take(l.w2);
    take(l.b2);
  }
  take(model.readout_w);
  take(model.readout_b);
}

Eigen::MatrixXd gnn_input_features(const Graph& g) {
  if (g.feature_dim() == 0) return Eigen::MatrixXd::Ones(g.num_nodes, 1);
  return g.features;
}

namespace {

// Disjoint union of a batch: stacked features/embeddings plus a CSR over
// the stacked row indices, so each layer is one GEMM.
struct BatchData {
  Eigen::MatrixXd x;
  Eigen::MatrixXd z;  // zero cols when no SRF injection
  std::vector<int> row_offset;  // size B+1
  std::vector<int> adj_off, adj;
  std::vector<int> labels;        // graph-level targets
  std::vector<int> node_labels;   // per_node targets, flat
  int total_rows = 0;
};

BatchData build_batch(const GnnModel& model,
                      std::span<const BatchItem> batch) {
  BatchData data;
  data.row_offset.push_back(0);
  int rows = 0;
  std::int64_t adj_entries = 0;
  for (const auto& item : batch) {
    rows += item.graph->num_nodes;
    adj_entries += 2 * item.graph->num_edges();
    data.row_offset.push_back(rows);
  }
  data.total_rows = rows;
  data.x = Eigen::MatrixXd(rows, model.input_dim);
  data.z = Eigen::MatrixXd(rows, model.cfg.srf_width);
  data.adj_off.reserve(rows + 1);
  data.adj_off.push_back(0);
  data.adj.reserve(adj_entries);

  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Graph& g = *batch[b].graph;
    const int base = data.row_offset[b];
    const Eigen::MatrixXd x = gnn_input_features(g);
    if (x.cols() != model.input_dim) {
      throw std::invalid_argument("forward: feature width mismatch");
    }
    data.x.middleRows(base, g.num_nodes) = x;
    if (model.cfg.srf_width > 0) {
      if (batch[b].z == nullptr) {
        throw std::invalid_argument("forward: model expects SRF injection");
      }
      if (batch[b].z->rows() != g.num_nodes ||
          batch[b].z->cols() != model.cfg.srf_width) {
        throw std::invalid_argument("forward: SRF width mismatch");
      }
      data.z.middleRows(base, g.num_nodes) = *batch[b].z;
    }
    for (int v = 0; v < g.num_nodes; ++v) {
      for (int u : g.neighbors(v)) data.adj.push_back(base + u);
      data.adj_off.push_back(static_cast<int>(data.adj.size()));
    }
    data.labels.push_back(batch[b].label);
    for (int y : g.node_labels) data.node_labels.push_back(y);
  }
  return data;
}

// y = x + A x over the batch CSR (GIN aggregation with eps = 0).
Eigen::MatrixXd aggregate(const BatchData& data, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd y = x;
  for (int i = 0; i < data.total_rows; ++i) {
    for (int k = data.adj_off[i]; k < data.adj_off[i + 1]; ++k) {
      y.row(i) += x.row(data.adj[k]);
    }
  }
  return y;
}

constexpr double kRmsEps = 1e-8;

// Per-node y = h / sqrt(mean(h^2) + eps); returns the inverse scale per
// row for the backward pass. The eps keeps the map smooth at dead rows.
Eigen::VectorXd rms_normalize_rows(Eigen::MatrixXd& h) {
  const double d = static_cast<double>(h.cols());
  Eigen::VectorXd inv_rms(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double r = 1.0 / std::sqrt(h.row(i).squaredNorm() / d + kRmsEps);
    inv_rms[i] = r;
    h.row(i) *= r;
  }
  return inv_rms;
}

struct LayerTrace {
  Eigen::MatrixXd u;        // aggregated concat input
  Eigen::MatrixXd p;        // post-relu
  Eigen::VectorXd inv_rms;  // normalization scales (when normalizing)
};

struct BatchForward {
  std::vector<Eigen::MatrixXd> hidden;  // H^(0..L), stacked rows
  std::vector<LayerTrace> traces;
  Eigen::MatrixXd graph_logits;  // B x C
  Eigen::MatrixXd node_logits;   // rows x C (per_node only)
};

BatchForward forward_batch(const GnnModel& model, const BatchData& data,
                           bool keep_traces) {
  BatchForward out;
  out.hidden.reserve(model.cfg.layers + 1);
  out.hidden.push_back(data.x);
  if (keep_traces) out.traces.resize(model.cfg.layers);

  Eigen::MatrixXd h = data.x;
  for (int l = 0; l < model.cfg.layers; ++l) {
    const auto& p = model.layers[l];
    Eigen::MatrixXd ht(data.total_rows, h.cols() + model.cfg.srf_width);
    ht.leftCols(h.cols()) = h;
    if (model.cfg.srf_width > 0) ht.rightCols(model.cfg.srf_width) = data.z;
    Eigen::MatrixXd u = aggregate(data, ht);
    Eigen::MatrixXd pre = (u * p.w1.transpose()).rowwise() + p.b1.transpose();
    Eigen::MatrixXd act = pre.cwiseMax(0.0);
    h = (act * p.w2.transpose()).rowwise() + p.b2.transpose();
    Eigen::VectorXd inv_rms;
    if (model.cfg.normalize_hidden) inv_rms = rms_normalize_rows(h);
    if (keep_traces) {
      out.traces[l].u = std::move(u);
      out.traces[l].p = std::move(act);
      out.traces[l].inv_rms = std::move(inv_rms);
    }
    out.hidden.push_back(h);
  }

  const int batch_size = static_cast<int>(data.row_offset.size()) - 1;
  switch (model.cfg.readout) {
    case Readout::sum_pool_graph: {
      Eigen::MatrixXd pooled(batch_size, model.cfg.hidden);
      for (int b = 0; b < batch_size; ++b) {
        pooled.row(b) = h.middleRows(data.row_offset[b],
                                     data.row_offset[b + 1] -
                                         data.row_offset[b])
                            .colwise()
                            .sum();
      }
      out.graph_logits =
          (pooled * model.readout_w.transpose()).rowwise() +
          model.readout_b.transpose();
      break;
    }
    case Readout::root_node: {
      Eigen::MatrixXd roots(batch_size, model.cfg.hidden);
      for (int b = 0; b < batch_size; ++b) {
        roots.row(b) = h.row(data.row_offset[b]);
      }
      out.graph_logits = (roots * model.readout_w.transpose()).rowwise() +
                         model.readout_b.transpose();
      break;
    }
    case Readout::per_node:
      out.node_logits = (h * model.readout_w.transpose()).rowwise() +
                        model.readout_b.transpose();
      break;
  }
  return out;
}

// Cross-entropy of one logits row; writes softmax - onehot into drow.
double cross_entropy_row(const Eigen::RowVectorXd& logits, int label,
                         Eigen::RowVectorXd& drow) {
  const double m = logits.maxCoeff();
  const Eigen::RowVectorXd e = (logits.array() - m).exp();
  const double s = e.sum();
  drow = e / s;
  drow[label] -= 1.0;
  return m + std::log(s) - logits[label];
}

int argmax_lowest(const Eigen::RowVectorXd& logits) {
  int best = 0;
  for (int c = 1; c < logits.size(); ++c) {
    if (logits[c] > logits[best]) best = c;
  }
  return best;
}

struct LossGradStats {
  double loss = 0.0;
  Eigen::VectorXd grad;
  int correct = 0;
  int count = 0;
};

LossGradStats loss_and_grad_impl(const GnnModel& model,
                                 std::span<const BatchItem> batch) {
  if (batch.empty()) {
    throw std::invalid_argument("loss_and_grad: empty batch");
  }
  const BatchData data = build_batch(model, batch);
  const BatchForward fwd = forward_batch(model, data, true);
  const int batch_size = static_cast<int>(batch.size());

  LossGradStats out;
  GnnModel grads = model;  // same shapes; values overwritten below
  for (auto& l : grads.layers) {
    l.w1.setZero();
    l.b1.setZero();
    l.w2.setZero();
    l.b2.setZero();
  }
  grads.readout_w.setZero();
  grads.readout_b.setZero();

  // Readout backward: dH is the gradient wrt the stacked final hidden.
  Eigen::MatrixXd dh =
      Eigen::MatrixXd::Zero(data.total_rows, model.cfg.hidden);
  double loss = 0.0;
  if (model.cfg.readout == Readout::per_node) {
    if (data.node_labels.size() != static_cast<std::size_t>(data.total_rows)) {
      throw std::invalid_argument("loss_and_grad: missing node labels");
    }
    Eigen::MatrixXd dlogits(data.total_rows, model.num_classes);
    Eigen::RowVectorXd drow(model.num_classes);
    for (int i = 0; i < data.total_rows; ++i) {
      const Eigen::RowVectorXd row = fwd.node_logits.row(i);
      loss += cross_entropy_row(row, data.node_labels[i], drow);
      dlogits.row(i) = drow;
      out.correct += argmax_lowest(row) == data.node_labels[i];
      ++out.count;
    }
    loss /= data.total_rows;
    dlogits /= static_cast<double>(data.total_rows);
    grads.readout_w = dlogits.transpose() * fwd.hidden.back();
    grads.readout_b = dlogits.colwise().sum();
    dh = dlogits * model.readout_w;
  } else {
    Eigen::MatrixXd dlogits(batch_size, model.num_classes);
    Eigen::RowVectorXd drow(model.num_classes);
    for (int b = 0; b < batch_size; ++b) {
      const int label = data.labels[b];
      if (label < 0 || label >= model.num_classes) {
        throw std::invalid_argument("loss_and_grad: label out of range");
      }
      const Eigen::RowVectorXd row = fwd.graph_logits.row(b);
      loss += cross_entropy_row(row, label, drow);
      dlogits.row(b) = drow;
      out.correct += argmax_lowest(row) == label;
      ++out.count;
    }
    loss /= batch_size;
    dlogits /= static_cast<double>(batch_size);

    Eigen::MatrixXd dpool = dlogits * model.readout_w;  // B x H
    Eigen::MatrixXd pooled(batch_size, model.cfg.hidden);
    const auto& h = fwd.hidden.back();
    for (int b = 0; b < batch_size; ++b) {
      const int base = data.row_offset[b];
      const int n = data.row_offset[b + 1] - base;
      if (model.cfg.readout == Readout::sum_pool_graph) {
        pooled.row(b) = h.middleRows(base, n).colwise().sum();
        dh.middleRows(base, n).rowwise() += dpool.row(b);
      } else {  // root_node
        pooled.row(b) = h.row(base);
        dh.row(base) += dpool.row(b);
      }
    }
    grads.readout_w = dlogits.transpose() * pooled;
    grads.readout_b = dlogits.colwise().sum();
  }

  for (int l = model.cfg.layers - 1; l >= 0; --l) {
    const auto& p = model.layers[l];
    const auto& trace = fwd.traces[l];
    if (model.cfg.normalize_hidden) {
      // y = r h with r = 1/sqrt(mean(h^2)+eps):
      //   dh = r (dy - y (y . dy) / d)
      const double d = static_cast<double>(dh.cols());
      const auto& y = fwd.hidden[l + 1];
      for (Eigen::Index i = 0; i < dh.rows(); ++i) {
        const double r = trace.inv_rms[i];
        dh.row(i) =
            r * (dh.row(i) - y.row(i) * (y.row(i).dot(dh.row(i)) / d));
      }
    }
    grads.layers[l].w2 = dh.transpose() * trace.p;
    grads.layers[l].b2 = dh.colwise().sum();
    Eigen::MatrixXd dact = dh * p.w2;
    dact = (trace.p.array() > 0.0).select(dact, 0.0);
    grads.layers[l].w1 = dact.transpose() * trace.u;
    grads.layers[l].b1 = dact.colwise().sum();
    const Eigen::MatrixXd du = dact * p.w1;
    // Aggregation is symmetric, so its adjoint is itself.
    const Eigen::MatrixXd dht = aggregate(data, du);
    dh = dht.leftCols(fwd.hidden[l].cols());
  }

  out.loss = loss;
  out.grad = pack_params(grads);
  return out;
}

}  // namespace

Forward forward(const GnnModel& model, const Graph& g,
                const Eigen::MatrixXd* z) {
  const BatchItem item{&g, z, g.label.value_or(0)};
  const BatchData data = build_batch(model, {&item, 1});
  BatchForward fwd = forward_batch(model, data, false);
  Forward out;
  out.hidden = std::move(fwd.hidden);
  if (model.cfg.readout == Readout::per_node) {
    out.node_logits = std::move(fwd.node_logits);
  } else {
    out.logits = fwd.graph_logits.row(0);
  }
  return out;
}

LossGrad loss_and_grad(const GnnModel& model,
                       std::span<const BatchItem> batch) {
  auto stats = loss_and_grad_impl(model, batch);
  return {stats.loss, std::move(stats.grad)};
}

double batch_loss(const GnnModel& model, std::span<const BatchItem> batch) {
  return loss_and_grad_impl(model, batch).loss;
}

int predict(const GnnModel& model, const Graph& g, const Eigen::MatrixXd* z) {
  const Forward fwd = forward(model, g, z);
  if (model.cfg.readout == Readout::per_node) {
    throw std::invalid_argument("predict: per_node readout has no single label");
  }
  return argmax_lowest(fwd.logits.transpose());
}

double dirichlet_energy(const Eigen::MatrixXd& h, const Graph& g) {
  if (h.rows() != g.num_nodes) {
    throw std::invalid_argument("dirichlet_energy: row count mismatch");
  }
  double total = 0.0;
  for (int v = 0; v < g.num_nodes; ++v) {
    for (int u : g.neighbors(v)) {
      total += (h.row(v) - h.row(u)).squaredNorm();
    }
  }
  return total / g.num_nodes;
}

double evaluate_accuracy(const GnnModel& model, const Dataset& ds,
                         std::span<const int> indices,
                         const std::vector<Eigen::MatrixXd>& z_per_graph) {
  if (indices.empty()) return 0.0;
  std::int64_t correct = 0, count = 0;
  if (model.cfg.readout == Readout::per_node) {
    for (int idx : indices) {
      const Graph& g = ds.graphs[idx];
      const Eigen::MatrixXd* z =
          z_per_graph.empty() ? nullptr : &z_per_graph[idx];
      const Forward fwd = forward(model, g, z);
      for (int v = 0; v < g.num_nodes; ++v) {
        correct += argmax_lowest(fwd.node_logits.row(v)) == g.node_labels[v];
        ++count;
      }
    }
    return static_cast<double>(correct) / static_cast<double>(count);
  }

  constexpr std::size_t kChunk = 64;
  for (std::size_t at = 0; at < indices.size(); at += kChunk) {
    const std::size_t end = std::min(indices.size(), at + kChunk);
    std::vector<BatchItem> batch;
    batch.reserve(end - at);
    for (std::size_t i = at; i < end; ++i) {
      const int idx = indices[i];
      batch.push_back({&ds.graphs[idx],
                       z_per_graph.empty() ? nullptr : &z_per_graph[idx],
                       ds.graphs[idx].label.value_or(-1)});
    }
    const BatchData data = build_batch(model, batch);
    const BatchForward fwd = forward_batch(model, data, false);
    for (std::size_t b = 0; b < batch.size(); ++b) {
      correct += argmax_lowest(fwd.graph_logits.row(b)) == batch[b].label;
      ++count;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(count);
}

TrainResult train(const GnnConfig& cfg, const Dataset& ds,
                  std::vector<Eigen::MatrixXd> z_per_graph,
                  const ZRefresher& refresh) {
  if (ds.train_idx.empty()) {
    throw std::invalid_argument("train: dataset has no train split");
  }
  if (!z_per_graph.empty() && z_per_graph.size() != ds.graphs.size()) {
    throw std::invalid_argument("train: need one embedding per graph");
  }
  const int input_dim =
      ds.graphs.empty() ? 1 : std::max(1, ds.graphs[0].feature_dim());

  RngState init_rng(cfg.seed, streams::init);
  TrainResult result;
  result.model = init_model(cfg, input_dim, ds.num_classes, init_rng);

  Eigen::VectorXd theta = pack_params(result.model);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::int64_t step = 0;

  RngState shuffle_rng(cfg.seed, streams::shuffle);
  std::vector<int> order(ds.train_idx);
  int plateau = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (refresh && !z_per_graph.empty()) refresh(epoch, z_per_graph);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(shuffle_rng.next_u64() % (i + 1));
      std::swap(order[i], order[j]);
    }

    double epoch_loss = 0.0;
    std::int64_t correct = 0, count = 0;
    int batches = 0;
    for (std::size_t at = 0; at < order.size(); at += cfg.batch_size) {
      const std::size_t end =
          std::min(order.size(), at + static_cast<std::size_t>(cfg.batch_size));
      std::vector<BatchItem> batch;
      batch.reserve(end - at);
      for (std::size_t i = at; i < end; ++i) {
        const int idx = order[i];
        batch.push_back({&ds.graphs[idx],
                         z_per_graph.empty() ? nullptr : &z_per_graph[idx],
                         ds.graphs[idx].label.value_or(-1)});
      }
      const auto stats = loss_and_grad_impl(result.model, batch);
      if (!std::isfinite(stats.loss)) {
        throw std::runtime_error("train: non-finite loss at epoch " +
                                 std::to_string(epoch));
      }
      epoch_loss += stats.loss;
      correct += stats.correct;
      count += stats.count;
      ++batches;

      ++step;
      for (Eigen::Index k = 0; k < theta.size(); ++k) {
        const double gk = stats.grad[k];
        m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * gk;
        v[k] = kBeta2 * v[k] + (1.0 - kBeta2) * gk * gk;
        const double mhat = m[k] / (1.0 - std::pow(kBeta1, step));
        const double vhat = v[k] / (1.0 - std::pow(kBeta2, step));
        theta[k] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + kEps);
      }
      unpack_params(result.model, theta);
    }

    EpochStats es;
    es.epoch = epoch;
    es.train_loss = epoch_loss / std::max(1, batches);
    es.train_acc = count > 0 ? static_cast<double>(correct) / count : 0.0;
    if (cfg.eval_every > 0 &&
        (epoch % cfg.eval_every == 0 || epoch == cfg.epochs - 1)) {
      es.val_acc =
          evaluate_accuracy(result.model, ds, ds.val_idx, z_per_graph);
      es.test_acc =
          evaluate_accuracy(result.model, ds, ds.test_idx, z_per_graph);
      if (es.test_acc > result.best_test_acc || result.best_epoch < 0) {
        result.best_test_acc = es.test_acc;
        result.best_epoch = epoch;
      }
    }
    result.history.push_back(es);

    plateau = es.train_acc >= 1.0 ? plateau + 1 : 0;
    if (cfg.early_stop_plateau > 0 && plateau >= cfg.early_stop_plateau) {
      break;
    }
  }
  return result;
}

void save_model_json(const GnnModel& model, const std::string& path) {
  nlohmann::json root;
  root["format"] = "srf-gnn-1";
  root["config"] = {{"layers", model.cfg.layers},
                    {"hidden", model.cfg.hidden},
                    {"srf_width", model.cfg.srf_width},
                    {"readout", to_string(model.cfg.readout)},
                    {"seed", model.cfg.seed}};
  root["input_dim"] = model.input_dim;
  root["num_classes"] = model.num_classes;
  const Eigen::VectorXd flat = pack_params(model);
  std::vector<double> params(flat.data(), flat.data() + flat.size());
  root["params"] = params;

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    out << root.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

GnnModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  nlohmann::json root;
  in >> root;
  if (root.value("format", "") != "srf-gnn-1") {
    throw std::runtime_error("unknown model format in " + path);
  }
  GnnConfig cfg;
  cfg.layers = root["config"]["layers"].get<int>();
  cfg.hidden = root["config"]["hidden"].get<int>();
  cfg.srf_width = root["config"]["srf_width"].get<int>();
  cfg.readout = readout_from_string(root["config"]["readout"]);
  cfg.seed = root["config"]["seed"].get<std::uint64_t>();
  RngState rng(cfg.seed, streams::init);
  GnnModel model = init_model(cfg, root["input_dim"].get<int>(),
                              root["num_classes"].get<int>(), rng);
  const auto params = root["params"].get<std::vector<double>>();
  if (static_cast<std::int64_t>(params.size()) != model.num_params()) {
    throw std::runtime_error("model parameter count mismatch in " + path);
  }
  unpack_params(model,
                Eigen::Map<const Eigen::VectorXd>(params.data(),
                                                  params.size()));
  return model;
}

void write_history_csv(const std::vector<EpochStats>& history,
                       const std::string& path) {
  std::ofstream out(path + ".tmp");
  if (!out) throw std::runtime_error("cannot write history: " + path);
  out << "epoch,split,loss,metric\n";
  for (const auto& es : history) {
    out << es.epoch << ",train," << es.train_loss << ',' << es.train_acc
        << '\n';
    out << es.epoch << ",val,," << es.val_acc << '\n';
    out << es.epoch << ",test,," << es.test_acc << '\n';
  }
  out.close();
  std::filesystem::rename(path + ".tmp", path);
}

}  // namespace srf
