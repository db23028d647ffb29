#ifndef SRF_GNN_HPP
#define SRF_GNN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srf/graph.hpp"
#include "srf/rng.hpp"

namespace srf {

enum class Readout { sum_pool_graph, root_node, per_node };

std::string to_string(Readout readout);
Readout readout_from_string(const std::string& name);

struct GnnConfig {
  int layers = 3;
  int hidden = 32;
  int srf_width = 0;  // k*D concatenated at every layer; 0 = baseline
  Readout readout = Readout::sum_pool_graph;
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  // Per-node RMS normalization of hidden states after every layer, the
  // deterministic stand-in for GIN's usual batch norm. Used by the
  // synthetic benchmarks and the oversmoothing measurements.
  bool normalize_hidden = false;
  // Stop once running train accuracy has been 1.0 for this many
  // consecutive epochs (0 = never).
  int early_stop_plateau = 0;
  // Evaluate val/test accuracy every this many epochs.
  int eval_every = 1;
};

/// One GIN layer: u = (1+eps) h~ + sum_neighbors h~ with eps = 0, followed
/// by a 2-layer perceptron w2 * relu(w1 * u + b1) + b2.
struct LayerParams {
  Eigen::MatrixXd w1;  // hidden x (prev_width + srf_width)
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // hidden x hidden
  Eigen::VectorXd b2;
};

struct GnnModel {
  GnnConfig cfg;
  int input_dim = 0;
  int num_classes = 0;
  std::vector<LayerParams> layers;
  Eigen::MatrixXd readout_w;  // num_classes x hidden
  Eigen::VectorXd readout_b;

  std::int64_t num_params() const;
};

/// Xavier-uniform weights (a = sqrt(6/(fan_in+fan_out))), zero biases,
/// deterministic per rng state.
GnnModel init_model(const GnnConfig& cfg, int input_dim, int num_classes,
                    RngState& rng);

Eigen::VectorXd pack_params(const GnnModel& model);
void unpack_params(GnnModel& model, const Eigen::VectorXd& flat);

/// Node features as consumed by the engine: the graph's features, or a
/// constant 1 per node for featureless graphs (F = 0).
Eigen::MatrixXd gnn_input_features(const Graph& g);

struct Forward {
  std::vector<Eigen::MatrixXd> hidden;  // H^(0) .. H^(L)
  Eigen::VectorXd logits;               // graph-level readouts
  Eigen::MatrixXd node_logits;          // per-node readout
};

/// z is the SRF block to concatenate at every layer (nullptr = baseline);
/// its row count must match the graph and its width the model's srf_width.
Forward forward(const GnnModel& model, const Graph& g,
                const Eigen::MatrixXd* z = nullptr);

struct BatchItem {
  const Graph* graph = nullptr;
  const Eigen::MatrixXd* z = nullptr;
  int label = -1;  // graph-level target; per_node reads graph->node_labels
};

/// Mean cross-entropy over the batch and exact reverse-mode gradients in
/// pack_params order.
struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};
LossGrad loss_and_grad(const GnnModel& model, std::span<const BatchItem> batch);

double batch_loss(const GnnModel& model, std::span<const BatchItem> batch);

/// Argmax with lowest-class-index tie break.
int predict(const GnnModel& model, const Graph& g,
            const Eigen::MatrixXd* z = nullptr);

/// Eq.-style Dirichlet energy: (1/N) sum_i sum_{j in N(i)} |h_i - h_j|^2;
/// each undirected edge contributes twice.
double dirichlet_energy(const Eigen::MatrixXd& h, const Graph& g);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;  // running accuracy over the epoch's minibatches
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct TrainResult {
  GnnModel model;
  std::vector<EpochStats> history;
  double best_test_acc = 0.0;
  int best_epoch = -1;
};

/// Refreshes the SRF blocks in place before an epoch (sketch-resampling
/// augmentation for the synthetic benchmarks); must be deterministic in
/// the epoch index.
using ZRefresher =
    std::function<void(int epoch, std::vector<Eigen::MatrixXd>& z)>;

/// Adam (beta1 = 0.9, beta2 = 0.999, eps = 1e-8) over shuffled
/// minibatches; deterministic per cfg.seed. z_per_graph is either empty
/// (baseline) or one embedding matrix per dataset graph. Aborts with a
/// diagnostic on non-finite loss.
TrainResult train(const GnnConfig& cfg, const Dataset& ds,
                  std::vector<Eigen::MatrixXd> z_per_graph,
                  const ZRefresher& refresh = nullptr);

double evaluate_accuracy(const GnnModel& model, const Dataset& ds,
                         std::span<const int> indices,
                         const std::vector<Eigen::MatrixXd>& z_per_graph);

void save_model_json(const GnnModel& model, const std::string& path);
GnnModel load_model_json(const std::string& path);

/// Long-format history CSV: epoch, split, loss, metric.
void write_history_csv(const std::vector<EpochStats>& history,
                       const std::string& path);

}  // namespace srf

#endif  // SRF_GNN_HPP
