"""种子派生"""

import hashlib
from typing import Union


def derive_seed(master: int, *parts: Union[str, int]) -> int:
    """由主种子和标签派生子种子，结果只取决于输入"""
    tag = ":".join([str(master)] + [str(p) for p in parts])
    digest = hashlib.sha256(tag.encode("utf-8")).hexdigest()
    return int(digest[:15], 16)
