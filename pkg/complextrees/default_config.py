import os

DEFAULT_CONFIG = {
    "results_dir": os.getenv("CTREES_RESULTS_DIR", "./results"),
    "log_level": os.getenv("CTREES_LOG_LEVEL", "WARNING"),
    "workers": int(os.getenv("CTREES_WORKERS", "1")),
    "seed": 0,
    # Words and relations
    "relation_tol": 1e-9,
    "max_word_length": 2**16,
    # Polynomial arithmetic
    "polynomial_trim": 1e-14,
    "gcd_tol": 1e-12,
    # Root finding
    "aberth_max_sweeps": 200,
    "root_residual_factor": 1e-8,
    "root_cluster_tol": 1e-6,
    "cloud_dedupe_radius": 1e-7,
    "word_pair_cap": 10**6,
    "raw_pair_cap": 2**26,
    "pair_chunk_rows": 2**18,
    "root_batch_rows": 2**15,
    # Geometry
    "disk_budget": 10**7,
    "escape_max_depth": 24,
    "escape_frontier_cap": 10**6,
    "escape_dedupe_cell": 1e-9,
    "escape_slack": 1e-7,
    # Dimension
    "dimension_bracket": (1e-6, 64.0),
    "dimension_tol": 1e-12,
    "bisection_max_iter": 200,
    "ray_samples": 2048,
    "ray_max_modulus": 2.0,
    # Families
    "sample_attempts": 10**5,
    # Parameter scans
    "scan_max_depth": 24,
    "scan_frontier_cap": 4096,
    "scan_disconnect_k": 8,
    "scan_block_rows": 8,
    # Rendering
    "segment_budget": 2 * 10**6,
    "point_budget": 2 * 10**6,
}
