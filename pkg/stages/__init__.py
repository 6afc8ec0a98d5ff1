"""
Stages directory for auto-discovery.

Place stage files here and they'll be discovered and loaded by
pipeline.load_stages(). Each stage inherits from LoopStage and defines:
- STAGE_NAME: For env var generation ({STAGE_NAME}_ENABLED, {STAGE_NAME}_PRIORITY)
- DEFAULT_PRIORITY: 0-100, higher runs first
"""
