"""Three-room gridworld with sequentially unlocked goals.

Layout (x grows right, y grows up; 15 columns, 3 rows):

    left room x in 0..2 | corridor x in 3..5 (y=1) | middle room x in 6..8 |
    corridor x in 9..11 (y=1) | right room x in 12..14

G1 sits in a middle-room corner, G2 in a corner of the outer room on G1's
side, G3 in one of the remaining middle-room corners. Standing on an
available goal pays its reward every step (goals never disappear); G2
unlocks once G1 has been visited and G3 once G2 has. Everything else pays
-0.1. The agent observes only its (x, y) position: reached-goal flags are
hidden state.
"""

import numpy as np

WIDTH, HEIGHT = 15, 3
HORIZON = 50
START = (7, 1)
N_ACTIONS = 5  # no-op, up, right, down, left
ACTION_DELTAS = np.array([[0, 0], [0, 1], [1, 0], [0, -1], [-1, 0]])

STEP_REWARD = -0.1
GOAL_REWARDS = (1.0, 10.0, 100.0)

MIDDLE_CORNERS = [(6, 0), (6, 2), (8, 0), (8, 2)]
LEFT_CORNERS = [(0, 0), (0, 2), (2, 0), (2, 2)]
RIGHT_CORNERS = [(12, 0), (12, 2), (14, 0), (14, 2)]

OBS_DIM = 2


def walkable_mask():
    m = np.zeros((WIDTH, HEIGHT), dtype=bool)
    for x0 in (0, 6, 12):
        m[x0:x0 + 3, :] = True
    m[3:6, 1] = True
    m[9:12, 1] = True
    return m


WALKABLE = walkable_mask()


def walkable_cells():
    return [(x, y) for x in range(WIDTH) for y in range(HEIGHT) if WALKABLE[x, y]]


def sample_tasks(rng, n):
    """Goal layouts as an (n, 3, 2) array of cell coordinates."""
    g1_idx = rng.integers(0, 4, size=n)
    g1 = np.array(MIDDLE_CORNERS)[g1_idx]
    side = np.where(g1[:, 0] == 6, 0, 1)  # 0: left room, 1: right room
    g2_idx = rng.integers(0, 4, size=n)
    g2 = np.where(side[:, None] == 0,
                  np.array(LEFT_CORNERS)[g2_idx],
                  np.array(RIGHT_CORNERS)[g2_idx])
    # G3: one of the three middle corners not used by G1
    offset = rng.integers(1, 4, size=n)
    g3 = np.array(MIDDLE_CORNERS)[(g1_idx + offset) % 4]
    return np.stack([g1, g2, g3], axis=1)


def reset_state(n):
    pos = np.tile(np.array(START), (n, 1))
    stage = np.zeros(n, dtype=np.int64)
    return pos, stage


def step(pos, stage, action, goals):
    """Vectorized transition for n agents.

    pos: (n, 2) int, stage: (n,) in 0..3 (number of goals reached so far),
    action: (n,) in 0..4, goals: (n, 3, 2).
    """
    cand = pos + ACTION_DELTAS[action]
    inside = (
        (cand[:, 0] >= 0) & (cand[:, 0] < WIDTH)
        & (cand[:, 1] >= 0) & (cand[:, 1] < HEIGHT)
    )
    ok = np.zeros(len(pos), dtype=bool)
    ok[inside] = WALKABLE[cand[inside, 0], cand[inside, 1]]
    new_pos = np.where(ok[:, None], cand, pos)

    reward = np.full(len(pos), STEP_REWARD)
    new_stage = stage.copy()
    on_goal_idx = np.full(len(pos), -1)
    # a goal pays iff it is unlocked: G_k available when stage >= k
    for k in range(3):
        on_k = np.all(new_pos == goals[:, k, :], axis=1) & (stage >= k)
        reward = np.where(on_k, GOAL_REWARDS[k], reward)
        on_goal_idx = np.where(on_k, k, on_goal_idx)
        new_stage = np.where(on_k, np.maximum(new_stage, k + 1), new_stage)

    info = {
        "stage": new_stage,
        "on_goal": on_goal_idx,
        "success": new_stage >= 3,
        "hit_wall": ~ok & (action != 0),
    }
    return new_pos, new_stage, reward, info
