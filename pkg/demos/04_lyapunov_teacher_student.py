"""Online adaptation against a known teacher network.

A teacher with fixed weights generates the target; a student with other
weights adapts with ``dWx/dt = x_tilde tanh(x_hat)``,
``dWp/dt = x_tilde tanh(p)``. Along the trajectory

    V = |x_tilde|^2 / 2 + |Wx_tilde|^2 / 2 + |Wp_tilde|^2 / 2

satisfies ``dV/dt <= -(1 - ||Wx||) |x_tilde|^2``: the weight terms cancel
and the recurrent term is bounded by the Lipschitz constant of ``tanh``.
So V never grows when the teacher's recurrent matrix has norm below the
leak, and it shrinks as fast as the input keeps the state moving.

    python demos/04_lyapunov_teacher_student.py
"""

import numpy as np

from tailsitter import adapt_online, generate_excitation, init_network
from tailsitter.training import ExcitationConfig


def main():
    n = 8
    teacher = init_network(n=n, seed=1, input_offset=[0.0])
    teacher.Wp = np.random.default_rng(7).uniform(-1.0, 1.0, (n, 1))
    student = init_network(n=n, seed=2, input_offset=[0.0])
    print(f"teacher ||Wx||_2 = {np.linalg.norm(teacher.Wx, 2):.3f} (< 1 needed)")
    _, p = generate_excitation(ExcitationConfig(channel="w", seed=3, n_samples=6000))
    for amplitude in (0.3, 3.0):
        out, samples = adapt_online(student, amplitude * p, 0.01, teacher=teacher)
        V = np.array([s.V for s in samples])
        print(f"\ninput amplitude {amplitude}:")
        for t in (0, 10, 20, 40, 60):
            print(f"  V({t:2d} s) = {V[int(t / 0.01)]:.4f}")
        print(f"  largest one-step increase: {np.max(np.diff(V)):.1e}")
        print(f"  recurrent weight error {np.linalg.norm(out.Wx - teacher.Wx):.3f}, "
              f"input weight error {np.linalg.norm(out.Wp - teacher.Wp):.3f}")


if __name__ == "__main__":
    main()
