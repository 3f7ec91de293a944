#include "camo/predator/pretrain.hpp"

#include <stdexcept>

#include "camo/predator/augment.hpp"

namespace camo::predator {

vision::Net<float> pretrain(const vision::ConvNetSpec& spec,
                            const std::vector<FcdExample>& dataset,
                            const PretrainConfig& config, Rng& rng,
                            const std::function<void(int, double)>& on_epoch) {
  if (dataset.empty()) throw std::invalid_argument("pretrain: empty dataset");
  spec.validate();
  vision::Net<float> net(spec);
  Rng init_rng = rng.derive("init");
  net.init_weights(init_rng);
  Rng order_rng = rng.derive("order");
  Rng augment_rng = rng.derive("augment");
  Rng dropout_rng = rng.derive("dropout");

  const size_t image_size = net.input_size();
  const int n = static_cast<int>(dataset.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  std::vector<float> batch_x;
  std::vector<Vec2> batch_y;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates shuffle
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(order_rng.uniform_int(0, i));
      std::swap(order[i], order[j]);
    }
    double loss_acc = 0.0;
    int batches = 0;
    for (int start = 0; start < n; start += config.batch) {
      const int count = std::min(config.batch, n - start);
      batch_x.resize(static_cast<size_t>(count) * image_size);
      batch_y.resize(count);
      for (int i = 0; i < count; ++i) {
        const FcdExample& ex = dataset[order[start + i]];
        const AugmentedImage aug = augment(ex.image, ex.label, augment_rng);
        const std::vector<float> chw = to_chw(aug.image);
        std::copy(chw.begin(), chw.end(), batch_x.begin() + i * image_size);
        batch_y[i] = aug.label;
      }
      loss_acc += net.train_step(batch_x.data(), batch_y.data(), count,
                                 config.learning_rate, dropout_rng);
      ++batches;
    }
    if (on_epoch) on_epoch(epoch, loss_acc / batches);
  }
  return net;
}

}  // namespace camo::predator
