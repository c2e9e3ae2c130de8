"""Run configuration: canonical hyperparameter keys, per-environment
defaults, and the flat `key = value` config-file format.

Key names follow the hyperparameter tables this lab standardizes on;
`rpf_weight_hyperstate` is the hyper-state bonus weight (lambda_h) and
`intrinsic_weight_vae_loss` the reconstruction-error bonus weight
(lambda_e). Unknown keys are rejected; every run echoes its full config
into the output directory.
"""

import ast

from .errors import ConfigError

# keys shared by every environment
_COMMON = {
    "env": None,
    "seed": 0,
    "frame_budget": 1_000_000,
    "belief_mode": "learned",          # learned | oracle (sparsedir only)
    "precision": "float64",            # float64 | float32
    "log_interval": 50_000,            # frames between eval/CSV rows
    "eval_num_tasks": 24,
    "final_eval_tasks": 100,
    "save_interval": None,             # frames between checkpoints (None: end only)

    "policy": "ppo",
    "policy_optimiser": "adam",
    "policy_activation_function": "tanh",
    "policy_anneal_lr": False,
    "policy_use_gae": True,
    "policy_value_loss_coef": 0.5,
    "policy_init_log_std": 0.0,
    "num_processes": 16,
    "lr_policy": 0.0007,

    "lr_vae": 0.001,
    "pretrain_len": 0,
    "rew_loss_coeff": 1.0,
    "state_loss_coeff": 1.0,
    "rlloss_through_encoder": False,
    "encoder_layers_before_gru": [],
    "encoder_gru_hidden_size": 128,
    "encoder_layers_after_gru": [],
    "vae_avg_reconstruction_terms": False,
    "vae_max_grad_norm": None,

    "intrinsic_rew_normalise_rewards": True,
    "intrinsic_rew_anneal_weight": True,
    "intrinsic_rew_for_vae_loss": True,
    "intrinsic_weight_vae_loss": 1.0,
    "lr_rpf": 0.0001,
    "rpf_batch_size": 128,
    "rpf_update_frequency": 1,
    "rpf_output_dim": 128,
    "layers_rpf_prior": [256, 256],
    "layers_rpf_predictor": [256, 256],
    "rpf_use_orthogonal_init": False,
    "rpf_norm_inputs": False,
    "rpf_init_weight_scale": 10.0,
    "rpf_input_mode": "hyperstate",    # hyperstate | state (bonus-input ablation)
    "rnd_ensemble_size": 1,
    "rnd_ensemble_beta": 1.0,
}

_PER_ENV = {
    "treasure": {
        "frame_budget": 5_000_000,
        "max_rollouts_per_task": 1,
        "policy_state_embedding_dim": None,
        "policy_latent_embedding_dim": None,
        "norm_state_for_policy": False,
        "norm_latent_for_policy": False,
        "norm_rew_for_policy": True,
        "norm_actions_pre_sampling": False,
        "norm_actions_post_sampling": True,
        "norm_rew_clip_param": 100.0,
        "policy_layers": [128, 128],
        "policy_initialisation": "orthogonal",
        "ppo_num_epochs": 2,
        "ppo_num_minibatch": 8,
        "ppo_clip_param": 0.05,
        "policy_num_steps": 150,
        "policy_eps": 1e-8,
        "policy_entropy_coef": 0.001,
        "policy_gamma": 0.97,
        "policy_tau": 0.9,
        "use_proper_time_limits": True,
        "vae_squash_targets": True,
        "size_vae_buffer": 10_000,
        "precollect_len": 100,
        "vae_batch_num_trajs": 15,
        "tbptt_stepsize": None,
        "vae_subsample_elbos": None,
        "vae_subsample_decodes": None,
        "vae_avg_elbo_terms": True,
        "num_vae_updates": 1,
        "kl_weight": 1.0,
        "action_embedding_size": 16,
        "state_embedding_size": 32,
        "reward_embedding_size": 16,
        "latent_dim": 25,
        "decode_reward": True,
        "normalise_rew_targets": True,
        "input_prev_state": True,
        "input_action": True,
        "reward_decoder_layers": [64, 32],
        "decode_state": True,
        "state_decoder_layers": [64, 32],
        "intrinsic_rew_clip_rewards": None,
        "rpf_weight_hyperstate": 1.0,
        "size_rpf_buffer": 10_000,
        "state_expl_idx": None,
    },
    "gridworld": {
        "frame_budget": 3_000_000,
        "max_rollouts_per_task": 1,
        "policy_state_embedding_dim": 32,
        "policy_latent_embedding_dim": 32,
        "norm_state_for_policy": True,
        "norm_latent_for_policy": True,
        "norm_rew_for_policy": True,
        "norm_actions_pre_sampling": False,
        "norm_actions_post_sampling": False,
        "norm_rew_clip_param": None,
        "policy_layers": [64],
        "policy_initialisation": "normc",
        "ppo_num_epochs": 8,
        "ppo_num_minibatch": 4,
        "ppo_clip_param": 0.05,
        "policy_num_steps": 50,
        "policy_eps": 1e-5,
        "policy_entropy_coef": 0.1,
        "policy_gamma": 0.98,
        "policy_tau": 0.95,
        "use_proper_time_limits": False,
        "vae_squash_targets": False,
        "size_vae_buffer": 100_000,
        "precollect_len": 5_000,
        "vae_batch_num_trajs": 25,
        "tbptt_stepsize": None,
        "vae_subsample_elbos": None,
        "vae_subsample_decodes": None,
        "vae_avg_elbo_terms": False,
        "num_vae_updates": 1,
        "kl_weight": 0.1,
        "action_embedding_size": 0,
        "state_embedding_size": 32,
        "reward_embedding_size": 8,
        "latent_dim": 10,
        "decode_reward": True,
        "normalise_rew_targets": False,
        "input_prev_state": False,
        "input_action": False,
        "reward_decoder_layers": [64, 64],
        "decode_state": False,
        "state_decoder_layers": [32, 32],
        "intrinsic_rew_clip_rewards": 10.0,
        "rpf_weight_hyperstate": 10.0,
        "size_rpf_buffer": 500_000,   # desk-scale cap; covers the full budget's visits
        "state_expl_idx": None,
    },
    "sparsedir": {
        "frame_budget": 2_000_000,
        "max_rollouts_per_task": 1,
        "policy_init_log_std": -1.2,  # naive action noise must not cross the sparse bound
        "policy_state_embedding_dim": 32,
        "policy_latent_embedding_dim": 32,
        "norm_state_for_policy": True,
        "norm_latent_for_policy": False,
        "norm_rew_for_policy": True,
        "norm_actions_pre_sampling": False,
        "norm_actions_post_sampling": False,
        "norm_rew_clip_param": None,
        "policy_layers": [128, 128],
        "policy_initialisation": "normc",
        "ppo_num_epochs": 2,
        "ppo_num_minibatch": 4,
        "ppo_clip_param": 0.1,
        "policy_num_steps": 200,
        "policy_eps": 1e-8,
        "policy_entropy_coef": 0.0001,
        "policy_gamma": 0.97,
        "policy_tau": 0.9,
        "use_proper_time_limits": True,
        "vae_squash_targets": False,
        "size_vae_buffer": 10_000,
        "precollect_len": 500,
        "vae_batch_num_trajs": 10,
        "tbptt_stepsize": None,
        "vae_subsample_elbos": None,
        "vae_subsample_decodes": None,
        "vae_avg_elbo_terms": True,
        "num_vae_updates": 1,
        "kl_weight": 1.0,
        "action_embedding_size": 16,
        "state_embedding_size": 32,
        "reward_embedding_size": 16,
        "latent_dim": 5,
        "decode_reward": True,
        "normalise_rew_targets": False,
        "input_prev_state": True,
        "input_action": True,
        "reward_decoder_layers": [64, 32],
        "decode_state": False,
        "state_decoder_layers": [64, 32],
        "intrinsic_rew_clip_rewards": None,
        "rpf_weight_hyperstate": 1.0,
        "size_rpf_buffer": 10_000,
        "state_expl_idx": [0],
    },
    "pointrobot": {
        "frame_budget": 2_000_000,
        "max_rollouts_per_task": 3,
        "policy_state_embedding_dim": 64,
        "policy_latent_embedding_dim": 64,
        "norm_state_for_policy": True,
        "norm_latent_for_policy": True,
        "norm_rew_for_policy": True,
        "norm_actions_pre_sampling": True,
        "norm_actions_post_sampling": False,
        "norm_rew_clip_param": 100_000.0,
        "policy_layers": [128, 128, 128],
        "policy_initialisation": "normc",
        "ppo_num_epochs": 2,
        "ppo_num_minibatch": 8,
        "ppo_clip_param": 0.1,
        "policy_num_steps": 600,
        "policy_eps": 1e-8,
        "policy_entropy_coef": 0.001,
        "policy_gamma": 0.99,
        "policy_tau": 0.9,
        "use_proper_time_limits": True,
        "vae_squash_targets": True,
        "size_vae_buffer": 10_000,
        "precollect_len": 5_000,
        "vae_batch_num_trajs": 10,
        "tbptt_stepsize": 50,
        "vae_subsample_elbos": 50,
        "vae_subsample_decodes": 50,
        "vae_avg_elbo_terms": False,
        "num_vae_updates": 3,
        "kl_weight": 1.0,
        "action_embedding_size": 16,
        "state_embedding_size": 32,
        "reward_embedding_size": 16,
        "latent_dim": 5,
        "decode_reward": True,
        "normalise_rew_targets": False,
        "input_prev_state": True,
        "input_action": True,
        "reward_decoder_layers": [64, 32],
        "decode_state": False,
        "state_decoder_layers": [64, 32],
        "intrinsic_rew_clip_rewards": None,
        "rpf_weight_hyperstate": 0.1,
        "size_rpf_buffer": 10_000,
        "state_expl_idx": None,
    },
}

KNOWN_KEYS = frozenset(_COMMON) | frozenset(
    k for env in _PER_ENV.values() for k in env)


def default_config(env):
    if env not in _PER_ENV:
        raise ConfigError("unknown environment id %r (known: %s)" % (env, sorted(_PER_ENV)))
    cfg = dict(_COMMON)
    cfg.update(_PER_ENV[env])
    cfg["env"] = env
    return cfg


def _parse_value(text):
    text = text.strip()
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text  # bare identifier, e.g. tanh / ppo / gridworld


def parse_config_text(text):
    """Parse flat `key = value` lines (#-comments and blanks ignored)."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("line %d: expected `key = value`, got %r" % (lineno, raw))
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError("line %d: unknown config key %r" % (lineno, key))
        out[key] = _parse_value(val)
    return out


def load_config(path=None, overrides=None, env=None):
    """Defaults for the file's env, updated by the file, then by overrides
    (a list of `key=value` strings)."""
    file_cfg = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            file_cfg = parse_config_text(fh.read())
    over_cfg = {}
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError("override must be key=value, got %r" % item)
        key, _, val = item.partition("=")
        if key.strip() not in KNOWN_KEYS:
            raise ConfigError("unknown config key %r" % key.strip())
        over_cfg[key.strip()] = _parse_value(val)
    env = over_cfg.get("env", file_cfg.get("env", env))
    if env is None:
        raise ConfigError("no environment id: set `env = ...` in the config file")
    cfg = default_config(env)
    cfg.update(file_cfg)
    cfg.update(over_cfg)
    validate(cfg)
    return cfg


def load_config_from_text(text):
    """Rebuild a full config from an echoed config text (e.g. a checkpoint)."""
    file_cfg = parse_config_text(text)
    if "env" not in file_cfg:
        raise ConfigError("config text lacks an `env` entry")
    cfg = default_config(file_cfg["env"])
    cfg.update(file_cfg)
    validate(cfg)
    return cfg


def validate(cfg):
    unknown = set(cfg) - KNOWN_KEYS
    if unknown:
        raise ConfigError("unknown config keys: %s" % sorted(unknown))
    if cfg["env"] not in _PER_ENV:
        raise ConfigError("unknown environment id %r" % cfg["env"])
    if cfg["belief_mode"] not in ("learned", "oracle"):
        raise ConfigError("belief_mode must be learned|oracle")
    if cfg["belief_mode"] == "oracle" and cfg["env"] != "sparsedir":
        raise ConfigError("oracle beliefs are only defined for sparsedir")
    if cfg["precision"] not in ("float64", "float32"):
        raise ConfigError("precision must be float64|float32")
    if cfg["rpf_input_mode"] not in ("hyperstate", "state"):
        raise ConfigError("rpf_input_mode must be hyperstate|state")
    if cfg["policy"] != "ppo" or cfg["policy_optimiser"] != "adam":
        raise ConfigError("this lab implements policy=ppo with policy_optimiser=adam")
    return cfg


def config_text(cfg):
    lines = []
    for key in sorted(cfg):
        lines.append("%s = %r" % (key, cfg[key]))
    return "\n".join(lines) + "\n"
