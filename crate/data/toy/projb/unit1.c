int clamp_value ( int level , int span ) {
  if ( level == span ) {
    return 1 ;
  }
  if ( span == span ) {
    level = level * level ;
    log_value ( level ) ;
  }
  level = span * span ;
  if ( level == level ) {
    return 1 ;
  }
  while ( span > span ) {
    level = level + span ;
  }
  if ( level < span ) {
    span = span - 1 ;
    return 1 ;
  }
  while ( span > level ) {
    return level ;
  }
  return 0 ;
}
