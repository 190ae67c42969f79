"""
Test utilities for p3t testing
Provides tree builders and isolated application directories
"""
import json
import os
import shutil
import tempfile
from contextlib import contextmanager
from pathlib import Path

from app.common import HOME_ENV_VAR
from app.tritree import Insertion, TriTree


def build_tree(n, hosts):
    """TriTree whose insertion k places vertex k + 3 into face node hosts[k]"""
    return TriTree(
        n=n, insertions=tuple(Insertion(k + 3, host) for k, host in enumerate(hosts))
    )


def k4():
    return build_tree(4, [0])


# Root children weights (bottom, left, right) = (8, 4, 0); n = 16
CASE1_HOSTS = [0, 1, 4, 7, 10, 13, 16, 19, 22, 2, 28, 31, 34]

# Root children weights (2, 10, 0); left child is heavy but not a hub at n_eff 16
CASE3_HOSTS = [0, 1, 4, 2, 10, 13, 16, 19, 22, 25, 28, 31, 34]

# Root children weights (10, 1, 1)
CASE2_HOSTS = [0, 2, 3, 1, 10, 13, 16, 19, 22, 25, 28, 31, 34]

# Root children (bottom, left) both of weight 5; n = 14
HEAVY_SIBLINGS_HOSTS = [0, 1, 4, 7, 10, 13, 2, 19, 22, 25, 28]


def chain_hosts(node, count, first):
    """Hosts for `count` insertions nested along bottom children, from `node` on"""
    hosts = []
    for k in range(first, first + count):
        hosts.append(node)
        node = 3 * k + 1
    return hosts


def split_root_hosts(bottom, left, right):
    """Root split once, then chains of the given sizes in its three children"""
    hosts, first = [0], 1
    for node, count in zip((1, 2, 3), (bottom, left, right)):
        hosts += chain_hosts(node, count, first)
        first += count
    return hosts


@contextmanager
def isolated_app_dir(config_data=None):
    """Temporary application directory, exported through P3T_HOME"""
    test_dir = Path(tempfile.mkdtemp())
    previous = os.environ.get(HOME_ENV_VAR)
    os.environ[HOME_ENV_VAR] = str(test_dir)
    try:
        if config_data is not None:
            with open(test_dir / "config.json", "w", encoding="utf-8") as f:
                json.dump(config_data, f, indent=2)
        yield test_dir
    finally:
        if previous is None:
            os.environ.pop(HOME_ENV_VAR, None)
        else:
            os.environ[HOME_ENV_VAR] = previous
        shutil.rmtree(test_dir, ignore_errors=True)
