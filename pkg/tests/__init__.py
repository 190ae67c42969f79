"""
Test package for p3t

Tests that touch config or log files run against temporary application
directories so the checkout's own config.json is never modified.

Test modules:
- test_tritree.py: 3-tree files, face trees, hubs and generators
- test_sparsegrid.py: point set membership, counts and rectangle queries
- test_exactgeom.py: exact orientation, crossings, verification, brute force
- test_shift_method.py: canonical ordering and shift-method drawings
- test_embedder.py: cases, fringe handling and end-to-end embeddings
- test_render.py: SVG output
- test_cli.py: subcommands and exit codes
- test_config_manager.py / test_logger_utils.py: ambient plumbing
- test_utils.py: tree builders and isolated app directories
"""

from app.versioning import VERSION

__version__ = VERSION
