"""
コマンドラインインターフェースモジュール。

`validate`・`trajectories`・`ensemble`・`check`・`rate` の各サブコマンドを提供する。
"""

from pilotwave.cli.app import App, main
from pilotwave.cli.config import RunConfig, resolve_threads

__all__ = ["App", "RunConfig", "main", "resolve_threads"]
