"""錐に添字付けられた bm 独立性のポアソン型極限モーメント計算ツール"""

__version__ = "0.1.0"
