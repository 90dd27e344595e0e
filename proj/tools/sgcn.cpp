#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sgcn/cli/commands.hpp"

namespace {

using sgcn::cli::CliOptions;

void add_model_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--precision", o.precision, "Floating point width")->check(CLI::IsMember({"32", "64"}));
  cmd->add_option("--adjacency-norm", o.adjacency_norm, "Adjacency normalization")
      ->check(CLI::IsMember({"relu-mean", "softmax"}));
  cmd->add_option("--ablation", o.ablations, "Remove a component (repeatable)")
      ->check(CLI::IsMember({"no_sgcn", "no_lstm", "no_layer_agg"}));
  cmd->add_option("--layers", o.layers, "SGCN layers (default 2)");
  cmd->add_option("--heads", o.heads, "Attention heads per layer (default 3)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-determined graph convolution for relation extraction"};
  app.require_subcommand(1);
  CliOptions o;

  auto* train = app.add_subcommand("train", "Train and keep the best dev checkpoint");
  train->add_option("--config", o.config, "Key-value config file");
  train->add_option("--data-dir", o.data_dir, "Directory with train.json and dev.json (or $SGCN_DATA_DIR)");
  train->add_option("--out-dir", o.out_dir, "Output directory")->required();
  train->add_option("--embeddings", o.embeddings, "Pretrained word vectors, one 'token v1 ... vd' per line");
  train->add_option("--max-epochs", o.max_epochs, "Override max_epochs");
  add_model_flags(train, o);

  auto* eval = app.add_subcommand("eval", "Score a checkpoint on a dataset file");
  eval->add_option("--checkpoint", o.checkpoint, "Checkpoint file")->required();
  eval->add_option("--input", o.input, "Dataset file")->required();
  eval->add_option("--precision", o.precision, "Load at this width")->check(CLI::IsMember({"32", "64"}));

  auto* predict = app.add_subcommand("predict", "Write predicted relations");
  predict->add_option("--checkpoint", o.checkpoint, "Checkpoint file")->required();
  predict->add_option("--input", o.input, "Dataset file")->required();
  predict->add_option("--output", o.output, "Output file (default stdout)");
  predict->add_option("--precision", o.precision, "Load at this width")->check(CLI::IsMember({"32", "64"}));

  auto* gen = app.add_subcommand("gen-synthetic", "Generate the synthetic trigger task");
  gen->add_option("--config", o.config, "Config file with synthetic.* keys");
  gen->add_option("--out-dir", o.out_dir, "Output directory")->required();
  gen->add_option("--seed", o.seed, "Generator seed");

  auto* adj = app.add_subcommand("export-adjacency", "Write one adjacency matrix as CSV");
  adj->add_option("--checkpoint", o.checkpoint, "Checkpoint file")->required();
  adj->add_option("--input", o.input, "Dataset file holding the sentence")->required();
  adj->add_option("--index", o.index, "Record index in the input file");
  adj->add_option("--layer", o.layer, "SGCN layer, from 0");
  adj->add_option("--head", o.head, "Head, from 0");
  adj->add_option("--output", o.output, "CSV path")->required();
  adj->add_option("--precision", o.precision, "Load at this width")->check(CLI::IsMember({"32", "64"}));

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of all gradients");
  grad->add_option("--config", o.config, "Model config overriding the toy defaults");
  add_model_flags(grad, o);
  grad->add_option("--inject-fault", o.fault_op, "Scale the backward rule of an op kind")->group("");
  grad->add_option("--fault-scale", o.fault_scale, "Scale used with --inject-fault")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sgcn::cli::kInputError;
  }

  if (*train) return sgcn::cli::cmd_train(o, std::cout, std::cerr);
  if (*eval) return sgcn::cli::cmd_eval(o, std::cout, std::cerr);
  if (*predict) return sgcn::cli::cmd_predict(o, std::cout, std::cerr);
  if (*gen) return sgcn::cli::cmd_gen_synthetic(o, std::cout, std::cerr);
  if (*adj) return sgcn::cli::cmd_export_adjacency(o, std::cout, std::cerr);
  return sgcn::cli::cmd_gradcheck(o, std::cout, std::cerr);
}
