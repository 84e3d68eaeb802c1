#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace srirnn {

enum class CellType { LSTM, GRU };

std::string_view to_string(CellType type);
CellType parse_cell_type(std::string_view name);

/// Gate blocks stacked in the weight matrices: 4 for LSTM, 3 for GRU.
constexpr int gate_count(CellType type) { return type == CellType::LSTM ? 4 : 3; }

/// Numerical precision of the streaming engine.
enum class Precision { Double, Single };

Precision parse_precision(std::string_view name);
std::string_view to_string(Precision precision);

/// One recurrent cell followed by an affine output head.
///
/// Gate blocks are stacked row-wise. LSTM order is (input, forget, candidate,
/// output); GRU order is (reset, update, new). The weights are never mutated
/// after construction, so a model can be shared by any number of streams.
struct RnnModel {
  CellType cell_type = CellType::LSTM;
  int hidden_size = 0;
  int input_size = 1;
  Eigen::MatrixXd w_ih;   // (G*H) x input_size
  Eigen::MatrixXd w_hh;   // (G*H) x H
  Eigen::VectorXd b_ih;   // G*H
  Eigen::VectorXd b_hh;   // G*H
  Eigen::RowVectorXd w_out;  // 1 x H
  double b_out = 0.0;
  bool skip = false;
  double train_rate = 44100.0;

  int gates() const { return gate_count(cell_type); }

  /// Length of the full recurrent state: H for GRU, 2H (h then c) for LSTM.
  int state_size() const { return cell_type == CellType::LSTM ? 2 * hidden_size : hidden_size; }

  /// Throws ShapeError / DomainError unless every tensor matches the declared
  /// topology and all weights are finite.
  void validate() const;
};

/// All-zero weights of the right shapes.
RnnModel zero_model(CellType type, int hidden_size, bool skip);

/// Seeded random model. Recurrent weights and biases are drawn uniformly from
/// +-1/sqrt(H) (the usual initialisation of the training toolchains); input
/// weights from +-input_scale so that small inputs still reach the saturating
/// part of the activations.
RnnModel random_model(CellType type, int hidden_size, std::uint64_t seed,
                      double input_scale = 1.0, bool skip = false);

inline constexpr double kSyntheticInputScale = 20.0;
inline constexpr double kSyntheticRetentionBias = 3.0;

/// Stand-in for a trained effect model: random_model with input weights of
/// +-kSyntheticInputScale (hard drive into the nonlinearity) and
/// kSyntheticRetentionBias added to the forget (LSTM) or update (GRU) gate
/// bias, so the state evolves slowly relative to the sample period.
RnnModel synthetic_model(CellType type, int hidden_size, std::uint64_t seed);

/// Recurrent state of one stream. `c` is empty for GRU.
struct CellState {
  std::vector<double> h;
  std::vector<double> c;

  static CellState zeros(const RnnModel& model);
};

}  // namespace srirnn
