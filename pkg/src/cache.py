#!/usr/bin/env python3
"""sqlite store of explored fragments, keyed by (algebra hash, start key, radius, seed, version)."""

import hashlib
import json
import logging
import os
import sqlite3
import time
from typing import Dict, Optional

import pandas as pd

logger = logging.getLogger(__name__)

CODE_VERSION = "qci-0.1.0"
DB_NAME = "fragments.db"


def cache_key(algebra_hash: str, start_key: str, radius: int, seed: int,
              version: str = CODE_VERSION) -> str:
    blob = json.dumps([algebra_hash, start_key, radius, seed, version])
    return hashlib.sha256(blob.encode()).hexdigest()


class FragmentCache:
    def __init__(self, cache_dir: str):
        os.makedirs(cache_dir, exist_ok=True)
        self.path = os.path.join(cache_dir, DB_NAME)
        self.init_db()

    def init_db(self):
        self.conn = sqlite3.connect(self.path)
        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS fragments (
                key TEXT PRIMARY KEY,
                algebra TEXT,
                start TEXT,
                radius INTEGER,
                seed INTEGER,
                version TEXT,
                digest TEXT,
                blob TEXT,
                created REAL
            )
        """)
        self.conn.commit()

    def get(self, key: str) -> Optional[Dict]:
        row = self.conn.execute("SELECT blob, digest FROM fragments WHERE key = ?", (key,)).fetchone()
        if row is None:
            return None
        blob, digest = row
        if hashlib.sha256(blob.encode()).hexdigest() != digest:
            logger.warning("cache entry %s is corrupt; ignoring it", key[:12])
            return None
        logger.debug("cache hit %s", key[:12])
        return json.loads(blob)

    def put(self, key: str, algebra_hash: str, start_key: str, radius: int, seed: int, data: Dict):
        blob = json.dumps(data, sort_keys=True)
        self.conn.execute(
            "INSERT OR REPLACE INTO fragments (key, algebra, start, radius, seed, version, digest, blob, created) "
            "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
            (key, algebra_hash, start_key, radius, seed, CODE_VERSION,
             hashlib.sha256(blob.encode()).hexdigest(), blob, time.time())
        )
        self.conn.commit()

    def entries(self) -> pd.DataFrame:
        return pd.read_sql_query(
            "SELECT algebra, start, radius, seed, version, created FROM fragments ORDER BY created", self.conn)

    def close(self):
        self.conn.close()
